#include "laocoon/protocol/election.hpp"

#include <algorithm>
#include <thread>

#include "laocoon/protocol/tally.hpp"

namespace laocoon::protocol {

using bulletin::Phase;

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn under a fresh counting scope and returns its op counts and time.
template <typename Fn>
std::pair<OpCounts, double> measure(Fn&& fn) {
  OpCounter counter;
  auto start = Clock::now();
  fn();
  std::chrono::duration<double> elapsed = Clock::now() - start;
  return {counter.counts(), elapsed.count()};
}

// Calls fn(i) for i in [0, n), spread over worker threads.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::size_t workers = std::max(2u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

constexpr int kMaxReissues = 8;

}  // namespace

void CostLedger::add(const std::string& phase, const std::string& entity, const OpCounts& ops, double seconds,
                     std::uint64_t bytes, std::uint64_t events) {
  std::lock_guard lock(mu_);
  auto& c = cells_[{phase, entity}];
  c.ops += ops;
  c.events += events;
  c.seconds += seconds;
  c.bytes += bytes;
}

CostCell CostLedger::get(const std::string& phase, const std::string& entity) const {
  std::lock_guard lock(mu_);
  auto it = cells_.find({phase, entity});
  return it == cells_.end() ? CostCell{} : it->second;
}

Election::Election(ElectionConfig cfg, std::uint64_t seed, bool concurrent)
    : cfg_(std::move(cfg)),
      concurrent_(concurrent),
      root_(seed),
      ctx_((cfg_.validate(), GroupContext::setup(cfg_.group_tag))),
      clock_(cfg_.clock_start) {
  admin_ = std::make_unique<Administrator>(ctx_, root_.fork("administrator"));
  proxy_ = std::make_unique<Proxy>(ctx_, root_.fork("proxy"), cfg_.audit_enabled);
  for (std::uint32_t i = 0; i < cfg_.num_voters; ++i) {
    voters_.push_back(std::make_unique<Voter>(i, ctx_, root_.fork("voter-" + std::to_string(i))));
  }
  for (const auto& name : cfg_.candidates) {
    candidates_.push_back(std::make_unique<Candidate>(name, ctx_, root_.fork("candidate-" + name)));
  }
  mix_ = std::make_unique<MixChannel>(cfg_.mix_window, root_.fork("mix"));
  adversary_rng_ = root_.fork("adversary");
}

const PublicSetup& Election::public_setup() const {
  if (!setup_) throw ProtocolError("S1", "setup-not-run");
  return *setup_;
}

Candidate& Election::candidate(const std::string& name) {
  for (auto& c : candidates_) {
    if (c->name() == name) return *c;
  }
  throw ProtocolError("B3", "unknown-candidate", name);
}

void Election::setup() {
  VoterRoll roll;
  for (auto& v : voters_) roll.voters.push_back(v->public_identity());
  auto before = board_.size();
  auto [ops, secs] = measure([&] { admin_->setup(board_, cfg_, roll); });
  costs_.add("setup", "administrator", ops, secs, 0, cfg_.num_voters);
  for (auto& c : candidates_) {
    auto [cops, csecs] = measure([&] { c->publish_key(board_); });
    costs_.add("setup", "candidate", cops, csecs, 0);
  }
  std::uint64_t bytes = 0;
  for (const auto& e : board_.since(before)) bytes += e.payload.size();
  costs_.add("setup", "board", {}, 0, bytes, 0);
  setup_ = PublicSetup::read(board_);
}

void Election::dispatch() {
  const auto& setup = public_setup();
  admin_->open_phase(board_, Phase::kDispatch);
  proxy_->load_setup(setup, cfg_);

  std::vector<Proxy::Delivery> deliveries;
  for (std::uint64_t n = 0; n < cfg_.total_credentials(); ++n) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > kMaxReissues) throw ProtocolError("C6", "reenc-reject", "reissue limit reached");
      Administrator::Issued issued;
      auto [aops, asecs] = measure([&] { issued = admin_->issue_credential(); });
      costs_.add("dispatch", "administrator", aops, asecs, issued.envelope.encode().size());
      if (in_transit) in_transit(issued.envelope, issued.serial);

      std::optional<Proxy::Delivery> delivery;
      auto [pops, psecs] = measure([&] {
        auto r = proxy_->forward_credential(issued.envelope);
        if (r) delivery = std::move(*r);
      });
      if (!delivery) {
        costs_.add("dispatch", "proxy-reject", pops, psecs, 0);
        admin_->discard(issued.serial);
        reissued_.push_back(issued.serial);
        continue;
      }
      costs_.add("dispatch", "proxy", pops, psecs, delivery->envelope.encode().size());
      deliveries.push_back(std::move(*delivery));
      break;
    }
  }

  auto receive = [&](const Proxy::Delivery& d) {
    auto [vops, vsecs] = measure([&] { (void)voters_[d.voter_index]->receive(setup, d.envelope); });
    costs_.add("dispatch", "voter", vops, vsecs, 0);
  };
  if (concurrent_ && !deliveries.empty()) {
    // One worker per voter so that each voter's state stays confined.
    std::map<std::uint32_t, std::vector<const Proxy::Delivery*>> by_voter;
    for (const auto& d : deliveries) by_voter[d.voter_index].push_back(&d);
    std::vector<std::vector<const Proxy::Delivery*>> groups;
    for (auto& [_, g] : by_voter) groups.push_back(std::move(g));
    parallel_for(groups.size(), [&](std::size_t i) {
      for (const auto* d : groups[i]) receive(*d);
    });
  } else {
    for (const auto& d : deliveries) receive(d);
  }

  envelope::HybridCiphertext sealed;
  auto [sops, ssecs] = measure([&] { sealed = admin_->seal_credential_list(proxy_->enc_public()); });
  costs_.add("dispatch", "administrator-list", sops, ssecs, sealed.encode().size());
  auto [lops, lsecs] = measure([&] { proxy_->load_credential_table(sealed); });
  costs_.add("dispatch", "proxy-list", lops, lsecs, 0);
}

void Election::open_casting() { admin_->open_phase(board_, Phase::kCast); }

void Election::cast(std::uint32_t voter, const std::string& candidate, std::size_t which) {
  BallotMessage bm;
  auto [ops, secs] = measure([&] { bm = voters_.at(voter)->cast(public_setup(), candidate, which); });
  auto payload = bm.encode();
  costs_.add("cast", "voter", ops, secs, payload.size());
  submit(std::move(payload));
}

void Election::cast_all(const std::vector<std::pair<std::uint32_t, std::string>>& votes) {
  // A voter listed again moves on to its next credential while it has one.
  std::map<std::uint32_t, std::size_t> seen;
  std::vector<std::size_t> which(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    auto held = voters_.at(votes[i].first)->credentials().size();
    auto occurrence = seen[votes[i].first]++;
    which[i] = held == 0 ? 0 : std::min(occurrence, held - 1);
  }
  if (!concurrent_ || votes.size() < 2) {
    for (std::size_t i = 0; i < votes.size(); ++i) cast(votes[i].first, votes[i].second, which[i]);
    return;
  }
  // Ballots of one voter are generated by one worker, in script order.
  std::map<std::uint32_t, std::vector<std::size_t>> by_voter;
  for (std::size_t i = 0; i < votes.size(); ++i) by_voter[votes[i].first].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [_, g] : by_voter) groups.push_back(std::move(g));
  std::vector<Bytes> payloads(votes.size());
  const auto& setup = public_setup();
  parallel_for(groups.size(), [&](std::size_t g) {
    for (auto i : groups[g]) {
      BallotMessage bm;
      auto [ops, secs] = measure([&] { bm = voters_.at(votes[i].first)->cast(setup, votes[i].second, which[i]); });
      payloads[i] = bm.encode();
      costs_.add("cast", "voter", ops, secs, payloads[i].size());
    }
  });
  for (auto& p : payloads) submit(std::move(p));
}

void Election::submit(Bytes ballot_payload) { process_released(mix_->submit(std::move(ballot_payload))); }

void Election::flush_mix() { process_released(mix_->flush()); }

void Election::process_released(std::vector<Bytes> batch) {
  for (const auto& payload : batch) {
    ProcessedBallot record;
    if (payload.size() >= 32) std::copy_n(payload.end() - 32, 32, record.cred_hash.begin());
    Expected<std::uint64_t, RejectReason> result = RejectReason::kInvalidBallot;
    auto [ops, secs] = measure([&] { result = proxy_->process_ballot(board_, payload, clock_); });
    if (result) {
      record.seq = *result;
      costs_.add("cast", "proxy", ops, secs, board_.since(*result).front().payload.size());
    } else {
      record.reason = result.error();
      costs_.add("cast", "proxy-reject", ops, secs, 0);
    }
    processed_.push_back(record);
  }
}

void Election::scan_candidates() {
  auto scan_one = [&](Candidate& c) {
    auto before = c.scanned_transactions();
    auto [ops, secs] = measure([&] { c.scan(board_); });
    costs_.add("open", "candidate", ops, secs, 0, c.scanned_transactions() - before);
  };
  if (concurrent_ && candidates_.size() > 1) {
    parallel_for(candidates_.size(), [&](std::size_t i) { scan_one(*candidates_[i]); });
  } else {
    for (auto& c : candidates_) scan_one(*c);
  }
}

void Election::close_casting() {
  flush_mix();
  scan_candidates();
  proxy_->close_casting(board_);
}

void Election::trigger_tally() { admin_->trigger_tally(board_); }

void Election::publish_candidate_secrets(const std::set<std::string>& withheld) {
  for (auto& c : candidates_) {
    if (withheld.contains(c->name())) continue;
    auto seq = board_.size();
    c->publish_secret(board_);
    costs_.add("open", "candidate-secret", {}, 0, board_.since(seq).front().payload.size());
  }
}

TallyReport Election::tally() {
  TallyReport report;
  auto seq = board_.size();
  auto [ops, secs] = measure([&] { report = run_tally(board_); });
  costs_.add("tally", "script", ops, secs, board_.since(seq).front().payload.size());
  return report;
}

std::vector<std::vector<Verdict>> Election::audit() {
  admin_->open_phase(board_, Phase::kAudit);
  proxy_->publish_commit_key(board_);
  std::vector<std::vector<Verdict>> verdicts;
  for (auto& v : voters_) verdicts.push_back(v->audit(board_));
  return verdicts;
}

TallyReport Election::run(const std::vector<std::pair<std::uint32_t, std::string>>& votes) {
  setup();
  dispatch();
  open_casting();
  cast_all(votes);
  close_casting();
  trigger_tally();
  publish_candidate_secrets();
  auto report = tally();
  if (cfg_.audit_enabled) audit();
  return report;
}

}  // namespace laocoon::protocol
