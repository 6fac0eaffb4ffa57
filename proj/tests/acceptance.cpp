// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "laocoon/harness.hpp"
#include "laocoon/mdvs.hpp"
#include "laocoon/pre.hpp"
#include "laocoon/pre_testing.hpp"
#include "laocoon/protocol/election.hpp"
#include "laocoon/protocol/tally.hpp"

using namespace laocoon;
namespace p = laocoon::protocol;
namespace h = laocoon::harness;

namespace {

const std::filesystem::path kSource = LAOCOON_SOURCE_DIR;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Result {
  bool pass = false;
  std::string detail;
};

const GroupContext& ctx() {
  static const GroupContext c = GroupContext::setup("laocoon-v1");
  return c;
}

p::ElectionConfig config(std::uint32_t voters, std::vector<std::string> candidates) {
  p::ElectionConfig c;
  c.num_voters = voters;
  c.candidates = std::move(candidates);
  return c;
}

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("C" + std::to_string(i));
  return out;
}

std::string fmt(double v, int prec = 2) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << v;
  return o.str();
}

Result criterion1() {
  DeterministicRandom rng(1001);
  auto t = Clock::now();
  int fail2 = 0, fail1 = 0;
  for (int i = 0; i < 1000; ++i) {
    auto kp = pre::keygen(ctx(), rng);
    auto m = ctx().z().pow(Scalar::random(rng));
    if (pre::dec2(ctx(), kp, pre::enc2(ctx(), kp.pub, m, rng)) != m) ++fail2;
  }
  for (int i = 0; i < 1000; ++i) {
    auto a = pre::keygen(ctx(), rng);
    auto b = pre::keygen(ctx(), rng);
    auto m = ctx().z().pow(Scalar::random(rng));
    auto c1 = pre::reenc(ctx(), pre::rekeygen(ctx(), a, b.pub, rng), pre::enc2(ctx(), a.pub, m, rng), rng);
    if (!c1 || pre::dec1(ctx(), b, *c1) != m) ++fail1;
  }
  auto secs = since(t);
  return {fail2 == 0 && fail1 == 0 && secs < 60,
          "dec2(enc2) failures " + std::to_string(fail2) + "/1000, dec1(reenc(enc2)) failures " +
              std::to_string(fail1) + "/1000, " + fmt(secs) + " s (limit 60 s)"};
}

Result criterion2() {
  DeterministicRandom rng(1002);
  auto a = pre::keygen(ctx(), rng);
  auto b = pre::keygen(ctx(), rng);
  auto rk = pre::rekeygen(ctx(), a, b.pub, rng);
  int reenc_rejects = 0, dec2_rejects = 0;
  for (int i = 0; i < 500; ++i) {
    auto k = Scalar::random_nonzero(rng);
    auto c = pre::testing::enc2_with(ctx(), a.pub, ctx().z().pow(Scalar::random(rng)), k);
    auto k2 = Scalar::random_nonzero(rng);
    if (k2 == k) k2 = k2 + Scalar::from_u64(1);
    if (rng.uniform_index(2) == 0) {
      c.alpha = ctx().g().pow(k2);
    } else {
      c.beta = ctx().h().pow(k2);
    }
    if (!pre::reenc(ctx(), rk, c, rng)) ++reenc_rejects;
    if (!pre::dec2(ctx(), a, c)) ++dec2_rejects;
  }
  return {reenc_rejects == 500 && dec2_rejects == 500,
          "reenc rejected " + std::to_string(reenc_rejects) + "/500, dec2 rejected " + std::to_string(dec2_rejects) +
              "/500"};
}

Result criterion3() {
  DeterministicRandom rng(1003);
  auto pseudonym = pre::keygen(ctx(), rng);
  auto candidate = pre::keygen(ctx(), rng);
  auto ballot = pre::rekeygen(ctx(), pseudonym, candidate.pub, rng);
  auto m = ctx().encode_timestamp(1'700'000'000);
  auto delta = pre::enc2(ctx(), pseudonym.pub, m, rng);
  std::set<Bytes> t1s, t2s, whole;
  int wrong = 0;
  for (int i = 0; i < 1000; ++i) {
    auto c = pre::reenc(ctx(), ballot, delta, rng);
    if (!c) {
      ++wrong;
      continue;
    }
    t1s.insert(c->t1.encode());
    t2s.insert(c->t2.encode());
    whole.insert(c->encode());
    if (pre::dec1(ctx(), candidate, *c) != m) ++wrong;
  }
  return {whole.size() == 1000 && t1s.size() == 1000 && t2s.size() == 1000 && wrong == 0,
          std::to_string(whole.size()) + "/1000 distinct ciphertexts (t1 " + std::to_string(t1s.size()) + ", t2 " +
              std::to_string(t2s.size()) + "), dec1 mismatches " + std::to_string(wrong)};
}

// Board sizes by voter count, filled by criterion 4 and 9.
std::map<std::uint32_t, std::size_t> g_entries;

std::size_t run_full(std::uint32_t voters, std::uint64_t seed, h::RunResult* out = nullptr) {
  h::RunSpec spec;
  spec.cfg = config(voters, names(5));
  spec.cfg.mix_window = 8;
  auto r = h::run_election(spec, seed);
  auto n = bulletin::parse_entries(r.board_text).size();
  g_entries[voters] = n;
  if (out) *out = std::move(r);
  return n;
}

Result criterion4() {
  auto t = Clock::now();
  h::RunResult r;
  run_full(100, 4004, &r);
  auto secs = since(t);
  // Brute-force recount of the vote script.
  std::map<std::string, std::uint64_t> recount;
  for (const auto& v : h::random_votes(config(100, names(5)), 4004)) ++recount[v.candidate];
  bool equal = r.report.total_valid == 100 && r.report.unopened == 0;
  std::string counts;
  for (const auto& [c, n] : r.report.counts) {
    equal &= recount[c] == n;
    counts += c + "=" + std::to_string(n) + "/" + std::to_string(recount[c]) + " ";
  }
  auto chain = bulletin::verify_chain(bulletin::parse_entries(r.board_text)).ok;
  auto verdict = h::verify_board_text(r.board_text);
  return {equal && chain && verdict.accept && secs < 120,
          "tally/recount " + counts + "chain " + (chain ? "ok" : "BROKEN") + ", verify " +
              (verdict.accept ? "accept" : "reject") + ", " + fmt(secs) + " s (limit 120 s)"};
}

Result criterion5() {
  // 20 voters double-cast, 20 more have a forged-hash ballot submitted beside
  // their honest one.
  auto cfg = config(40, {"C1", "C2"});
  cfg.mix_window = 5;
  p::Election e(cfg, 5005);
  e.setup();
  e.dispatch();
  e.open_casting();
  const auto& setup = e.public_setup();
  auto& adv = e.adversary_rng();
  std::set<Digest> double_hashes, forged_hashes;
  for (std::uint32_t v = 0; v < 20; ++v) {
    e.cast(v, "C1");
    e.cast(v, "C2");
    double_hashes.insert(e.voter(v).credentials()[0].credential.hash());
  }
  for (std::uint32_t v = 20; v < 40; ++v) {
    auto fake = pre::keygen(setup.ctx, adv);
    p::BallotMessage bm;
    bm.ballot = pre::rekeygen(setup.ctx, fake, setup.candidate("C2")->pk, adv);
    adv.fill(bm.cred_hash);
    forged_hashes.insert(bm.cred_hash);
    e.submit(bm.encode());
    e.cast(v, "C1");
  }
  e.close_casting();
  e.trigger_tally();
  e.publish_candidate_secrets();
  auto r = e.tally();

  int used = 0, unknown = 0, misattributed = 0;
  std::map<Digest, int> accepted;
  for (const auto& pb : e.processed()) {
    if (pb.seq) {
      ++accepted[pb.cred_hash];
      continue;
    }
    if (pb.reason == p::RejectReason::kUsedCredential && double_hashes.contains(pb.cred_hash)) {
      ++used;
    } else if (pb.reason == p::RejectReason::kUnknownCredential && forged_hashes.contains(pb.cred_hash)) {
      ++unknown;
    } else {
      ++misattributed;
    }
  }
  bool once = true;
  for (const auto& [_, n] : accepted) once &= n == 1;
  // Extra votes: anything counted beyond one per issued credential.
  auto extra = static_cast<std::int64_t>(r.total_valid) - 40;

  // The shipped scenarios exercising the same paths.
  bool scenarios = true;
  for (const char* name : {"double-cast", "forged-hash"}) {
    scenarios &= h::run_scenario(h::load_scenario(kSource / "scenarios" / (std::string(name) + ".scenario")), 1).pass;
  }
  return {extra == 0 && used == 20 && unknown == 20 && misattributed == 0 && once && scenarios &&
              r.rejected.at("reject-used-credential") == 20 && r.rejected.at("reject-unknown-credential") == 20,
          "extra counted votes " + std::to_string(extra) + ", reject-used-credential " + std::to_string(used) +
              "/20, reject-unknown-credential " + std::to_string(unknown) + "/20, wrong reasons " +
              std::to_string(misattributed) + ", scenario files " + (scenarios ? "pass" : "FAIL")};
}

Result criterion6() {
  // Every position of a raw ring.
  DeterministicRandom rng(1006);
  mdvs::Ring ring;
  std::vector<mdvs::DvKeyPair> keys;
  for (int i = 0; i < 12; ++i) {
    keys.push_back(mdvs::DvKeyPair::generate(ctx(), rng));
    ring.push_back(keys.back().y);
  }
  auto msg = to_bytes("PK_i");
  std::size_t ring_ok = 0;
  for (std::size_t pos = 1; pos < ring.size(); ++pos) {
    ring_ok += mdvs::verify(ctx(), mdvs::forge(ctx(), keys[pos].x, pos, ring, msg, rng), msg);
  }
  // Every voter of an election forging its own credential.
  p::Election e(config(10, {"C1", "C2"}), 6006);
  e.setup();
  e.dispatch();
  std::size_t voters_ok = 0;
  for (std::uint32_t v = 0; v < 10; ++v) {
    auto fake = e.voter(v).forge_credential(e.public_setup());
    auto cred = p::decode_credential(fake.credential_bytes, e.public_setup().admin.dv, e.public_setup().roll);
    voters_ok += mdvs::verify(e.context(), cred.sig, cred.pk.encode()) && p::verify_credential(e.public_setup(), cred);
  }
  std::string scen;
  bool scenarios = true;
  for (const char* name : {"randomization-attack", "forced-abstention", "simulation-attack"}) {
    auto out = h::run_scenario(h::load_scenario(kSource / "scenarios" / (std::string(name) + ".scenario")), 1);
    scenarios &= out.pass;
    scen += std::string(name) + " " + (out.pass ? "pass" : "FAIL") + ", ";
  }
  return {ring_ok == ring.size() - 1 && voters_ok == 10 && scenarios,
          "ring positions " + std::to_string(ring_ok) + "/" + std::to_string(ring.size() - 1) + ", voter forgeries " +
              std::to_string(voters_ok) + "/10, " + scen.substr(0, scen.size() - 2)};
}

Result criterion7() {
  h::RunSpec spec;
  spec.cfg = config(20, {"C1", "C2", "C3"});
  spec.cfg.audit_enabled = true;
  spec.cfg.mix_window = 4;
  auto r = h::run_election(spec, 7007);
  std::size_t verified = 0, total = 0;
  for (const auto& v : r.verdicts) {
    for (auto x : v) {
      ++total;
      verified += x == p::Verdict::kVerified;
    }
  }
  auto honest_claims = p::summarize_audit(bulletin::parse_entries(r.board_text)).claims;

  auto suppressed = h::run_scenario(h::load_scenario(kSource / "scenarios/audit-suppressed.scenario"), 1);
  auto claims = p::summarize_audit(bulletin::parse_entries(suppressed.board_text)).claims;

  // Flip one payload byte of entry 13 in the honest board file.
  auto text = r.board_text;
  const std::uint64_t target = 13;
  std::size_t pos = 0;
  for (std::uint64_t line = 1; line < target + 2; ++line) pos = text.find('\n', pos) + 1;
  for (int field = 0; field < 3; ++field) pos = text.find('\t', pos) + 1;
  text[pos] = text[pos] == 'f' ? 'e' : 'f';
  auto verdict = h::verify_board_text(text);
  bool tamper_ok = !verdict.accept && verdict.bad_seq && *verdict.bad_seq == target;

  return {verified == total && total == 20 && honest_claims == 0 && claims == 1 && suppressed.pass && tamper_ok,
          "honest verdicts verified " + std::to_string(verified) + "/" + std::to_string(total) +
              ", suppressed-ballot claims " + std::to_string(claims) + ", tampered entry " + std::to_string(target) +
              " rejected at " + (verdict.bad_seq ? std::to_string(*verdict.bad_seq) : std::string("none"))};
}

Result criterion8() {
  auto cfg = config(20, names(5));
  cfg.mix_window = 4;
  auto b = h::bench(cfg, 8008);
  const auto& open = b.rows.back();
  bool open_ok = open.entity == "Candidate" && open.exact && open.measured == h::SignedCounts{0, 1, 0, 0, 0, 0} &&
                 open.events == 100;
  bool flagged = true;
  std::string deltas;
  for (const auto& row : b.rows) {
    if (row.published.s != 0) flagged &= !row.comparable;
    auto published = row.published;
    published.s = 0;
    deltas += row.entity + "(" + row.phase.substr(0, row.phase.find(' ')) + ") " + (row.measured - published).str() + "; ";
  }
  return {open_ok && b.derived_ok && flagged && b.voter_ballot_ms < 100,
          std::string("opening ") + (open_ok ? "exactly 1 E2/transaction" : "NOT 1 E2/transaction") +
              ", rows match derived table: " + (b.derived_ok ? "yes" : "no") + ", S cells flagged: " +
              (flagged ? "yes" : "no") + ", voter ballot " + fmt(b.voter_ballot_ms, 3) + " ms (limit 100 ms)" +
              ", deltas vs published " + deltas.substr(0, deltas.size() - 2)};
}

Result criterion9() {
  std::vector<std::uint32_t> sizes = {10, 50, 100, 200};
  for (auto n : sizes) {
    if (!g_entries.contains(n)) run_full(n, 9000 + n);
  }
  // Least squares of entries on votes (every voter votes once).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto n : sizes) {
    double x = n, y = static_cast<double>(g_entries[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double k = static_cast<double>(sizes.size());
  double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  // Per vote: one rekey-list entry at setup and one transaction.
  const double per_vote = 2.0;
  double rel = std::abs(slope - per_vote) / per_vote;
  std::string pts;
  for (auto n : sizes) pts += std::to_string(n) + "->" + std::to_string(g_entries[n]) + " ";
  return {rel <= 0.01, "entries " + pts + "slope " + fmt(slope, 4) + " vs " + fmt(per_vote, 1) +
                           " per vote (deviation " + fmt(100 * rel, 3) + "%)"};
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<Result()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9},
  };
  int failed = 0;
  for (auto& [n, fn] : criteria) {
    Result r;
    auto t = Clock::now();
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << "  [" << fmt(since(t), 1)
              << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
