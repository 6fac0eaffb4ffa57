#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "laocoon/harness.hpp"
#include "laocoon/protocol/tally.hpp"

namespace laocoon::harness {

using protocol::Election;
using protocol::ProtocolError;
using protocol::RejectReason;
using protocol::Verdict;
namespace kind = bulletin::kind;

namespace {

std::uint64_t as_u64(const std::string& s) { return std::stoull(s); }
std::uint32_t as_u32(const std::string& s) { return static_cast<std::uint32_t>(std::stoul(s)); }

std::string_view step_of(RejectReason r) {
  return r == RejectReason::kInvalidBallot ? "B8" : "B6";
}

// Flips the first payload hex digit of entry `seq` in a serialized board.
std::string tamper_payload(const std::string& text, std::uint64_t seq) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  auto idx = static_cast<std::size_t>(seq) + 1;
  if (idx >= lines.size()) throw ProtocolError("tamper", "no-such-entry", std::to_string(seq));
  auto& line = lines[idx];
  std::size_t field = 0, pos = 0;
  while (field < 3) {
    pos = line.find('\t', pos);
    if (pos == std::string::npos) throw ProtocolError("tamper", "malformed-line", std::to_string(seq));
    ++pos;
    ++field;
  }
  if (pos >= line.size() || line[pos] == '\t') throw ProtocolError("tamper", "empty-payload", std::to_string(seq));
  line[pos] = line[pos] == '0' ? '1' : '0';
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// The coercer's check on a surrendered credential: it decodes against the
// public roll and passes Step B2.
bool coercer_checks(const protocol::PublicSetup& setup, const Bytes& credential_bytes) {
  try {
    auto c = protocol::decode_credential(credential_bytes, setup.admin.dv, setup.roll);
    return protocol::verify_credential(setup, c);
  } catch (const DecodeError&) {
    return false;
  }
}

bool contains(const Bytes& hay, ByteView needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

// Strategy 1: with (rk, h_i) in hand the coercer needs PK_i to rebuild a
// transaction. It succeeds only if PK_i, or sigma_i itself, is published.
bool receipt_strategy_1(const bulletin::BulletinBoard& board, const protocol::Voter::Held& held) {
  auto pk = held.credential.pk.encode();
  auto pk2 = held.credential.pk.pk2.encode();
  for (const auto& entry : board.snapshot()) {
    if (contains(entry.payload, pk) || contains(entry.payload, pk2) ||
        contains(entry.payload, held.credential_bytes)) {
      return true;
    }
  }
  return false;
}

// Strategy 2: the coercer holds the ballot and sees every transaction. It
// links when some transaction carries a component of rk or h_i verbatim.
bool receipt_strategy_2(const bulletin::BulletinBoard& board, const protocol::Voter::Held& held) {
  auto bm = protocol::BallotMessage::decode(held.last_ballot);
  std::vector<Bytes> needles{bm.ballot.r1.encode(), bm.ballot.r2.encode(), bm.ballot.r3.encode(),
                             bm.ballot.r4.encode(), Bytes(bm.cred_hash.begin(), bm.cred_hash.end())};
  for (const auto& entry : board.query(bulletin::Phase::kCast, kind::kTransaction)) {
    for (const auto& n : needles) {
      if (contains(entry.payload, n)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Vote> random_votes(const ElectionConfig& cfg, std::uint64_t seed) {
  DeterministicRandom root(seed);
  auto rng = root.fork("vote-script");
  std::vector<Vote> votes;
  votes.reserve(cfg.num_voters);
  for (std::uint32_t i = 0; i < cfg.num_voters; ++i) {
    votes.push_back({i, cfg.candidates[rng->uniform_index(cfg.candidates.size())]});
  }
  return votes;
}

RunResult run_election(const RunSpec& spec, std::uint64_t seed, const std::optional<std::filesystem::path>& board_path,
                       bool concurrent) {
  RunResult out;
  out.votes = spec.votes.empty() ? random_votes(spec.cfg, seed) : spec.votes;
  std::vector<std::pair<std::uint32_t, std::string>> script;
  for (const auto& v : out.votes) script.emplace_back(v.voter, v.candidate);

  Election e(spec.cfg, seed, concurrent);
  e.setup();
  e.dispatch();
  e.open_casting();
  e.cast_all(script);
  e.close_casting();
  e.trigger_tally();
  e.publish_candidate_secrets();
  out.report = e.tally();
  if (spec.cfg.audit_enabled) out.verdicts = e.audit();
  out.board_text = e.board().serialize();
  if (board_path) e.board().persist(*board_path);
  return out;
}

ScenarioOutcome run_scenario(const Scenario& s, std::uint64_t seed) {
  ScenarioOutcome out;
  std::vector<bool> coercer;
  std::vector<bool> receipts;  // true when a receipt attempt linked a transaction
  std::vector<std::pair<std::uint32_t, std::string>> receipt_requests;  // (voter, strategy)
  std::set<std::string> withheld;
  std::optional<std::uint64_t> tamper_seq;
  std::vector<std::vector<Verdict>> verdicts;
  std::uint64_t denunciations = 0;
  std::optional<BoardVerdict> board_verdict;

  try {
    Election e(s.spec.cfg, seed);
    e.setup();
    e.dispatch();
    const auto& setup = e.public_setup();
    for (std::uint32_t i = 0; i < s.spec.cfg.num_voters; ++i) {
      for (const auto& d : e.voter(i).denunciations()) out.log.push_back("voter " + std::to_string(i) + " " + d);
    }

    for (const auto& a : s.actions) {
      if (a.verb == "suppress-ballot") {
        const auto& held = e.voter(as_u32(a.args[0])).credentials();
        if (held.empty()) throw ProtocolError("audit", "no-credential");
        e.proxy().misbehavior.drop_ballots.insert(sha256(held.front().credential_bytes));
      } else if (a.verb == "wrong-commit-key") {
        e.proxy().misbehavior.publish_wrong_commit_key = true;
      } else if (a.verb == "withhold-key") {
        withheld.insert(a.args[0]);
      } else if (a.verb == "tamper-board") {
        tamper_seq = as_u64(a.args[0]);
      }
    }

    e.open_casting();
    auto& adversary = e.adversary_rng();
    for (const auto& a : s.actions) {
      const auto& v = a.verb;
      if (v == "cast") {
        e.cast(as_u32(a.args[0]), a.args[1], a.args.size() == 3 ? as_u64(a.args[2]) : 0);
      } else if (v == "double-cast") {
        auto voter = as_u32(a.args[0]);
        e.cast(voter, a.args[1], 0);
        e.cast(voter, a.args.size() == 3 ? a.args[2] : a.args[1], 0);
      } else if (v == "forge-credential-cast") {
        const auto* target = setup.candidate(a.args[1]);
        auto fake = pre::keygen(setup.ctx, adversary);
        protocol::BallotMessage bm;
        bm.ballot = pre::rekeygen(setup.ctx, fake, target->pk, adversary);
        adversary.fill(bm.cred_hash);
        e.submit(bm.encode());
      } else if (v == "strategy-1" || v == "strategy-2") {
        e.cast(as_u32(a.args[0]), a.args[1], 0);
        receipt_requests.emplace_back(as_u32(a.args[0]), v);
      } else if (v == "abstain") {
        out.log.push_back("voter " + a.args[0] + " abstains");
      } else if (v == "coerce-and-forge" || v == "randomize" || v == "force-abstain") {
        auto voter = as_u32(a.args[0]);
        auto fake = e.voter(voter).forge_credential(setup, 0);
        const auto& genuine = e.voter(voter).credentials().front().credential_bytes;
        bool accepted = coercer_checks(setup, fake.credential_bytes) &&
                        fake.credential_bytes.size() == genuine.size();
        std::optional<std::string> coercer_choice;
        std::optional<std::string> real_choice;
        if (v == "coerce-and-forge") {
          coercer_choice = a.args[1];
          real_choice = a.args[2];
        } else if (v == "randomize") {
          coercer_choice = s.spec.cfg.candidates[adversary.uniform_index(s.spec.cfg.candidates.size())];
          if (a.args.size() == 2) real_choice = a.args[1];
        } else {
          real_choice = a.args[1];
        }
        if (coercer_choice) {
          auto bm = protocol::make_ballot(setup, fake.sk, fake.credential_bytes, *coercer_choice, adversary);
          e.submit(bm.encode());
        }
        if (real_choice) e.cast(voter, *real_choice, 0);
        if (v == "force-abstain") {
          // The coercer looks for anything on the board tied to the voter or
          // to the credential it holds.
          e.flush_mix();
          auto fake_hash = sha256(fake.credential_bytes);
          auto dv = e.voter(voter).public_identity().dv.encode();
          for (const auto& entry : e.board().query(bulletin::Phase::kCast)) {
            if (contains(entry.payload, fake_hash) || contains(entry.payload, dv)) accepted = false;
          }
        }
        coercer.push_back(accepted);
        out.log.push_back("coercer " + std::string(accepted ? "accepts" : "rejects") + " the credential of voter " +
                          a.args[0]);
      }
    }

    e.close_casting();
    for (const auto& [voter, strategy] : receipt_requests) {
      const auto& held = e.voter(voter).credentials().front();
      bool linked = strategy == "strategy-1" ? receipt_strategy_1(e.board(), held)
                                             : receipt_strategy_2(e.board(), held);
      receipts.push_back(linked);
      out.log.push_back(strategy + ": coercer " + (linked ? "links" : "cannot link") + " the ballot of voter " +
                        std::to_string(voter));
    }
    for (const auto& p : e.processed()) {
      if (!p.reason) continue;
      if (e.proxy().misbehavior.drop_ballots.contains(p.cred_hash)) {
        out.log.push_back("proxy silently dropped a ballot");
      } else {
        out.log.push_back(std::string(step_of(*p.reason)) + ": " + std::string(to_string(*p.reason)));
      }
    }
    e.trigger_tally();
    e.publish_candidate_secrets(withheld);
    out.report = e.tally();
    if (s.spec.cfg.audit_enabled) verdicts = e.audit();
    for (std::uint32_t i = 0; i < s.spec.cfg.num_voters; ++i) denunciations += e.voter(i).denunciations().size();

    out.board_text = e.board().serialize();
    if (tamper_seq) out.board_text = tamper_payload(out.board_text, *tamper_seq);
    board_verdict = verify_board_text(out.board_text);
  } catch (const ProtocolError& err) {
    out.log.push_back(err.what());
    out.mismatches.push_back(std::string("protocol error: ") + err.what());
    return out;
  }

  std::uint64_t claims = 0;
  for (const auto& entry : bulletin::parse_entries(out.board_text)) {
    if (entry.kind == kind::kClaim) ++claims;
  }
  auto verdict_count = [&](Verdict want) {
    std::uint64_t n = 0;
    for (const auto& vs : verdicts) n += static_cast<std::uint64_t>(std::count(vs.begin(), vs.end(), want));
    return n;
  };

  for (const auto& x : s.expected) {
    auto mismatch = [&](const std::string& what, std::uint64_t want, std::uint64_t got) {
      if (want != got) {
        out.mismatches.push_back("line " + std::to_string(x.line) + ": " + what + " expected " +
                                 std::to_string(want) + ", got " + std::to_string(got));
      }
    };
    const auto& w = x.what;
    if (w == "count") {
      mismatch("count " + x.args[0], as_u64(x.args[1]), out.report.count_for(x.args[0]));
    } else if (w == "total-valid") {
      mismatch(w, as_u64(x.args[0]), out.report.total_valid);
    } else if (w == "unopened") {
      mismatch(w, as_u64(x.args[0]), out.report.unopened);
    } else if (w == "transactions") {
      mismatch(w, as_u64(x.args[0]), out.report.transactions);
    } else if (w == "rejected") {
      auto it = out.report.rejected.find(x.args[0]);
      mismatch("rejected " + x.args[0], as_u64(x.args[1]), it == out.report.rejected.end() ? 0 : it->second);
    } else if (w == "verdicts") {
      auto want = x.args[0] == "verified" ? Verdict::kVerified : Verdict::kMissing;
      mismatch("verdicts " + x.args[0], as_u64(x.args[1]), verdict_count(want));
    } else if (w == "claims") {
      mismatch(w, as_u64(x.args[0]), claims);
    } else if (w == "denunciations") {
      mismatch(w, as_u64(x.args[0]), denunciations);
    } else if (w == "chain-reject") {
      if (!board_verdict->bad_seq) {
        out.mismatches.push_back("line " + std::to_string(x.line) + ": chain-reject expected at seq " + x.args[0] +
                                 ", chain verifies");
      } else {
        mismatch("chain-reject seq", as_u64(x.args[0]), *board_verdict->bad_seq);
      }
    } else if (w == "chain-ok") {
      if (board_verdict->bad_seq) {
        out.mismatches.push_back("line " + std::to_string(x.line) + ": chain breaks at seq " +
                                 std::to_string(*board_verdict->bad_seq));
      }
    } else if (w == "coercer-accepts") {
      bool all = !coercer.empty() && std::all_of(coercer.begin(), coercer.end(), [](bool b) { return b; });
      if (!all) out.mismatches.push_back("line " + std::to_string(x.line) + ": coercer rejected a forged credential");
    } else if (w == "receipt-fails") {
      bool none = !receipts.empty() && std::none_of(receipts.begin(), receipts.end(), [](bool b) { return b; });
      if (!none) out.mismatches.push_back("line " + std::to_string(x.line) + ": a receipt linked a transaction");
    } else if (w == "verify") {
      bool want = x.args[0] == "accept";
      if (board_verdict->accept != want) {
        out.mismatches.push_back("line " + std::to_string(x.line) + ": verify expected " + x.args[0] + ", got " +
                                 (board_verdict->accept ? "accept" : "reject") + " (" + board_verdict->detail + ")");
      }
    }
  }
  out.pass = out.mismatches.empty();
  return out;
}

BoardVerdict verify_board_text(std::string_view text) {
  BoardVerdict v;
  std::vector<bulletin::Entry> entries;
  try {
    entries = bulletin::parse_entries(text);
  } catch (const bulletin::BoardError& e) {
    v.detail = e.what();
    return v;
  }
  auto chain = bulletin::verify_chain(entries);
  if (!chain.ok) {
    v.bad_seq = chain.first_bad_seq;
    v.detail = "chain check failed at seq " + std::to_string(chain.first_bad_seq) + ": " + chain.reason;
    return v;
  }

  std::optional<TallyReport> published;
  try {
    published = protocol::published_tally(entries);
  } catch (const DecodeError& e) {
    v.detail = std::string("unreadable tally-result entry: ") + e.what();
    return v;
  }
  if (!published) {
    v.detail = "no tally-result entry on the board";
    return v;
  }

  protocol::TallyInputs inputs;
  try {
    v.recount = protocol::compute_tally(entries, &inputs);
  } catch (const std::exception& e) {
    v.detail = std::string("recount failed: ") + e.what();
    return v;
  }
  const auto& recount = *v.recount;

  if (recount.unopened > 0) {
    std::string why = std::to_string(recount.unopened) + " transaction(s) opened by no published key";
    if (!inputs.withheld.empty()) {
      why += "; no usable secret for";
      for (const auto& n : inputs.withheld) why += " " + n;
    }
    v.detail = why;
    return v;
  }
  for (const auto& [name, n] : published->counts) {
    auto got = recount.count_for(name);
    bool declared = std::any_of(recount.counts.begin(), recount.counts.end(),
                                [&](const auto& c) { return c.first == name; });
    if (!declared) {
      v.detail = "published report names unknown candidate " + name;
      return v;
    }
    if (got != n) {
      v.detail = "count mismatch for candidate " + name + ": published " + std::to_string(n) + ", recount " +
                 std::to_string(got);
      return v;
    }
  }
  for (const auto& [name, n] : recount.counts) {
    bool listed = std::any_of(published->counts.begin(), published->counts.end(),
                              [&](const auto& c) { return c.first == name; });
    if (!listed) {
      v.detail = "published report omits candidate " + name;
      return v;
    }
  }
  if (published->total_valid != recount.total_valid || published->unopened != recount.unopened ||
      published->transactions != recount.transactions || published->rejected != recount.rejected) {
    v.detail = "published totals differ from the recount";
    return v;
  }
  v.accept = true;
  v.detail = "chain verifies and the recount matches the published tally";
  return v;
}

BoardVerdict verify_board(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    BoardVerdict v;
    v.detail = "cannot open " + path.string();
    return v;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return verify_board_text(ss.str());
}

}  // namespace laocoon::harness
