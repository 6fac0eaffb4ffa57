#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "laocoon/protocol/election.hpp"
#include "laocoon/protocol/tally.hpp"
#include "support.hpp"

using namespace laocoon;
using namespace laocoon::protocol;
using bulletin::Phase;
namespace kind = laocoon::bulletin::kind;
using laocoon::test::ctx;

namespace {

ElectionConfig config(std::uint32_t voters, std::vector<std::string> candidates, bool audit = false,
                      std::uint32_t window = 1) {
  ElectionConfig c;
  c.num_voters = voters;
  c.candidates = std::move(candidates);
  c.audit_enabled = audit;
  c.mix_window = window;
  return c;
}

// Election advanced to the open cast phase.
std::unique_ptr<Election> ready(const ElectionConfig& cfg, std::uint64_t seed) {
  auto e = std::make_unique<Election>(cfg, seed);
  e->setup();
  e->dispatch();
  e->open_casting();
  return e;
}

void finish(Election& e) {
  e.close_casting();
  e.trigger_tally();
  e.publish_candidate_secrets();
}

bool contains(const Bytes& hay, const Bytes& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::map<std::string, std::uint64_t> script_counts(const std::vector<std::pair<std::uint32_t, std::string>>& v) {
  std::map<std::string, std::uint64_t> m;
  for (const auto& [_, c] : v) ++m[c];
  return m;
}

std::map<std::string, std::uint64_t> report_counts(const TallyReport& r) {
  std::map<std::string, std::uint64_t> m;
  for (const auto& [c, n] : r.counts) {
    if (n) m[c] = n;
  }
  return m;
}

void check_report_invariants(const TallyReport& r) {
  std::uint64_t sum = 0;
  for (const auto& [_, n] : r.counts) sum += n;
  EXPECT_EQ(r.total_valid, sum);
  EXPECT_EQ(r.total_valid + r.unopened, r.transactions);
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_NO_THROW(config(1, {"YES", "NO"}).validate());
  EXPECT_THROW(config(0, {"YES", "NO"}).validate(), ConfigError);
  EXPECT_THROW(config(3, {"ONLY"}).validate(), ConfigError);
  EXPECT_THROW(config(3, {"A", "A"}).validate(), ConfigError);
  auto c = config(3, {"A", "B"}, false, 0);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Setup, BoardContents) {
  auto cfg = config(3, {"C1", "C2"});
  Election e(cfg, 1);
  e.setup();
  const auto& b = e.board();
  EXPECT_EQ(b.query(Phase::kSetup, kind::kRekeyList).size(), 3u);
  EXPECT_EQ(b.query(Phase::kSetup, kind::kCandidateKey).size(), 2u);
  EXPECT_EQ(b.query(Phase::kSetup, kind::kParams).size(), 1u);
  EXPECT_EQ(b.query(Phase::kSetup, kind::kHashSpec).size(), 1u);
  auto cert = AdminCert::decode(b.query(Phase::kSetup, kind::kAdminCert).at(0).payload);
  EXPECT_TRUE(cert.verify(ctx()));
  EXPECT_EQ(e.public_setup().rekeys.size(), 3u);
  EXPECT_THROW(e.admin().setup(e.board(), cfg, e.public_setup().roll), ProtocolError);
}

TEST(Setup, RekeysSatisfyConsistencyIdentity) {
  DeterministicRandom rng(70);
  auto cfg = config(4, {"C1", "C2"});
  std::vector<pre::KeyPair> voters;
  VoterRoll roll;
  for (int i = 0; i < 4; ++i) {
    voters.push_back(pre::keygen(ctx(), rng));
    roll.voters.push_back({voters.back().pub, mdvs::DvKeyPair::generate(ctx(), rng).y});
  }
  Administrator admin(ctx(), rng.fork("admin"));
  bulletin::BulletinBoard board;
  admin.setup(board, cfg, roll);
  auto entries = board.query(Phase::kSetup, kind::kRekeyList);
  ASSERT_EQ(entries.size(), 4u);
  for (const auto& en : entries) {
    auto rec = RekeyRecord::decode(en.payload);
    const auto& vj = voters.at(rec.voter_index);
    // e(r1, h) = e(pk_j2, r2) * e(pk_j2, h)^{a_A1}, with e(pk_j2, h)^{a_A1} = pk_A1^{a_j2}.
    auto lhs = pairing(rec.rk.r1, ctx().h());
    auto rhs = pairing(vj.pub.pk2, rec.rk.r2) * admin.enc_public().pk1.pow(vj.sk2);
    EXPECT_EQ(lhs, rhs) << rec.voter_index;
  }
}

TEST(Dispatch, EveryVoterHoldsOneValidCredential) {
  auto e = ready(config(6, {"C1", "C2"}), 2);
  for (std::uint32_t i = 0; i < 6; ++i) {
    const auto& held = e->voter(i).credentials();
    ASSERT_EQ(held.size(), 1u) << i;
    EXPECT_TRUE(verify_credential(e->public_setup(), held[0].credential));
    EXPECT_TRUE(e->voter(i).denunciations().empty());
  }
  EXPECT_EQ(e->proxy().table().size(), 6u);
  EXPECT_EQ(e->proxy().table().used_count(), 0u);
}

TEST(Dispatch, AssignmentIsAPermutation) {
  auto e = ready(config(8, {"C1", "C2"}), 3);
  auto a = e->proxy().assignments();
  std::sort(a.begin(), a.end());
  std::vector<std::uint32_t> want(8);
  std::iota(want.begin(), want.end(), 0);
  EXPECT_EQ(a, want);
}

TEST(Dispatch, PermutationDependsOnSeed) {
  auto a = ready(config(8, {"C1", "C2"}), 4)->proxy().assignments();
  auto b = ready(config(8, {"C1", "C2"}), 5)->proxy().assignments();
  EXPECT_NE(a, b);
}

TEST(Dispatch, CorruptedEnvelopeIsReissued) {
  Election e(config(4, {"C1", "C2"}), 6);
  e.in_transit = [](envelope::HybridCiphertext& c, std::uint64_t serial) {
    if (serial == 1) std::get<pre::CiphertextL2>(c.kem).beta = ctx().h();
  };
  e.setup();
  e.dispatch();
  EXPECT_EQ(e.reissued(), std::vector<std::uint64_t>{1});
  EXPECT_EQ(e.admin().live_credentials(), 4u);
  for (std::uint32_t i = 0; i < 4; ++i) EXPECT_EQ(e.voter(i).credentials().size(), 1u);
  EXPECT_EQ(e.costs().get("dispatch", "proxy-reject").events, 1u);
}

TEST(Dispatch, PersistentCorruptionGivesUp) {
  Election e(config(2, {"C1", "C2"}), 7);
  e.in_transit = [](envelope::HybridCiphertext& c, std::uint64_t) {
    std::get<pre::CiphertextL2>(c.kem).beta = ctx().h();
  };
  e.setup();
  try {
    e.dispatch();
    FAIL();
  } catch (const ProtocolError& err) {
    EXPECT_EQ(err.step(), "C6");
    EXPECT_EQ(err.code(), "reenc-reject");
  }
}

TEST(Dispatch, ExhaustedIndex) {
  auto e = ready(config(2, {"C1", "C2"}), 8);
  auto extra = e->admin().issue_credential();
  try {
    (void)e->proxy().forward_credential(extra.envelope);
    FAIL();
  } catch (const ProtocolError& err) {
    EXPECT_EQ(err.step(), "C5");
    EXPECT_EQ(err.code(), "exhausted-index");
  }
}

TEST(Receive, WrongVoterGetsDemAuthFailure) {
  auto cfg = config(3, {"C1", "C2"});
  Election e(cfg, 9);
  e.setup();
  e.proxy().load_setup(e.public_setup(), cfg);
  auto issued = e.admin().issue_credential();
  auto d = e.proxy().forward_credential(issued.envelope);
  ASSERT_TRUE(d);
  auto other = (d->voter_index + 1) % 3;
  auto r = e.voter(other).receive(e.public_setup(), d->envelope);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error(), ReceiveError::kDemAuthFailed);
  EXPECT_TRUE(e.voter(d->voter_index).receive(e.public_setup(), d->envelope));
}

TEST(Receive, PerturbedSignatureAborts) {
  auto e = ready(config(3, {"C1", "C2"}), 10);
  auto& v = e->voter(0);
  const auto& held = v.credentials().at(0);
  CredentialBundle bundle{held.sk.encode_secret(), held.credential_bytes};
  bundle.credential.back() ^= 0x01;  // low bit of the last response scalar
  DeterministicRandom rng(11);
  auto c = envelope::hybrid_enc(ctx(), v.public_identity().enc, bundle.encode(), rng);
  auto r = v.receive(e->public_setup(), c);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error(), ReceiveError::kInvalidCredential);
  ASSERT_EQ(v.denunciations().size(), 1u);
  EXPECT_EQ(v.credentials().size(), 1u);
}

TEST(Cast, OneTransactionPerBallot) {
  auto e = ready(config(3, {"C1", "C2"}), 12);
  auto before = e->board().query(std::nullopt, kind::kTransaction).size();
  e->cast(0, "C1");
  EXPECT_EQ(e->board().query(std::nullopt, kind::kTransaction).size(), before + 1);
  const auto* row = e->proxy().table().find(e->voter(0).credentials()[0].credential.hash());
  ASSERT_NE(row, nullptr);
  EXPECT_TRUE(row->used);
}

TEST(Cast, SameCredentialSameHash) {
  auto e = ready(config(2, {"C1", "C2"}), 13);
  auto a = e->voter(0).cast(e->public_setup(), "C1");
  auto b = e->voter(0).cast(e->public_setup(), "C2");
  EXPECT_EQ(a.cred_hash, b.cred_hash);
  EXPECT_NE(a.ballot, b.ballot);
}

TEST(Cast, UnknownCandidate) {
  auto e = ready(config(2, {"C1", "C2"}), 14);
  try {
    e->cast(0, "C9");
    FAIL();
  } catch (const ProtocolError& err) {
    EXPECT_EQ(err.step(), "B3");
    EXPECT_EQ(std::string(err.what()).rfind("B3: unknown-candidate", 0), 0u) << err.what();
  }
}

TEST(Mix, AllSixOrdersOccur) {
  std::set<std::string> orders;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MixChannel mix(3, std::make_unique<DeterministicRandom>(seed));
    EXPECT_TRUE(mix.submit(to_bytes("a")).empty());
    EXPECT_TRUE(mix.submit(to_bytes("b")).empty());
    auto out = mix.submit(to_bytes("c"));
    ASSERT_EQ(out.size(), 3u);
    std::string order;
    for (const auto& p : out) order += static_cast<char>(p[0]);
    orders.insert(order);
  }
  EXPECT_EQ(orders.size(), 6u);
}

TEST(Mix, FlushReleasesRemainder) {
  MixChannel mix(4, std::make_unique<DeterministicRandom>(1));
  (void)mix.submit(to_bytes("a"));
  (void)mix.submit(to_bytes("b"));
  EXPECT_EQ(mix.pending(), 2u);
  EXPECT_EQ(mix.flush().size(), 2u);
  EXPECT_EQ(mix.pending(), 0u);
}

TEST(Proxy, RejectionReasons) {
  auto e = ready(config(3, {"C1", "C2"}), 15);
  auto& p = e->proxy();
  auto bm = e->voter(0).cast(e->public_setup(), "C1");
  auto first = p.process_ballot(e->board(), bm.encode(), e->clock());
  ASSERT_TRUE(first);
  auto again = p.process_ballot(e->board(), bm.encode(), e->clock());
  ASSERT_FALSE(again);
  EXPECT_EQ(again.error(), RejectReason::kUsedCredential);

  DeterministicRandom rng(16);
  auto forged = bm;
  rng.fill(forged.cred_hash);
  auto unknown = p.process_ballot(e->board(), forged.encode(), e->clock());
  ASSERT_FALSE(unknown);
  EXPECT_EQ(unknown.error(), RejectReason::kUnknownCredential);

  auto junk = p.process_ballot(e->board(), to_bytes("not a ballot"), e->clock());
  ASSERT_FALSE(junk);
  EXPECT_EQ(junk.error(), RejectReason::kInvalidBallot);
  EXPECT_EQ(p.rejections().size(), 3u);
  EXPECT_EQ(e->board().query(std::nullopt, kind::kTransaction).size(), 1u);
}

TEST(CredentialTable, UsedFlipsOnce) {
  CredentialTable t;
  Digest h{};
  h[0] = 1;
  t.insert(h, CredentialRow{});
  EXPECT_FALSE(t.find(h)->used);
  t.mark_used(h);
  EXPECT_TRUE(t.find(h)->used);
  EXPECT_THROW(t.mark_used(h), std::logic_error);
  Digest other{};
  EXPECT_THROW(t.mark_used(other), std::logic_error);
  EXPECT_EQ(t.used_count(), 1u);
}

TEST(Candidate, RunningCounts) {
  auto e = ready(config(3, {"C1", "C2"}), 17);
  e->cast_all({{0, "C1"}, {1, "C1"}, {2, "C2"}});
  e->scan_candidates();
  EXPECT_EQ(e->candidate("C1").running_count(), 2u);
  EXPECT_EQ(e->candidate("C2").running_count(), 1u);
}

TEST(Candidate, ZeroTransactions) {
  auto e = ready(config(2, {"C1", "C2"}), 18);
  e->scan_candidates();
  EXPECT_EQ(e->candidate("C1").running_count(), 0u);
  EXPECT_EQ(e->candidate("C1").scanned_transactions(), 0u);
}

TEST(Candidate, OtherCandidatesTransactionsNeverMatch) {
  DeterministicRandom rng(19);
  Candidate c1("C1", ctx(), rng.fork("c1"));
  Candidate c2("C2", ctx(), rng.fork("c2"));
  bulletin::BulletinBoard board;
  LogicalClock clock(1'700'000'000);
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    auto pseudonym = pre::keygen(ctx(), rng);
    auto ballot = pre::rekeygen(ctx(), pseudonym, c1.enc_public(), rng);
    auto stp = clock.tick();
    auto delta = pre::enc2(ctx(), pseudonym.pub, ctx().encode_timestamp(stp), rng);
    VotingTransaction tx{*pre::reenc(ctx(), ballot, delta, rng), stp, std::nullopt};
    board.append(Phase::kCast, kind::kTransaction, tx.encode());
  }
  EXPECT_EQ(c2.scan(board), 0u);
  EXPECT_EQ(c2.scanned_transactions(), static_cast<std::uint64_t>(n));
  EXPECT_EQ(c1.scan(board), static_cast<std::uint64_t>(n));
}

TEST(Candidate, AdaptivenessRunningCountTracksTruth) {
  auto cfg = config(12, {"A", "B", "C"});
  auto e = ready(cfg, 20);
  DeterministicRandom rng(21);
  std::map<std::string, std::uint64_t> truth;
  std::set<std::uint64_t> own_seqs_a;
  for (std::uint32_t v = 0; v < cfg.num_voters; ++v) {
    const auto& choice = cfg.candidates[rng.uniform_index(3)];
    e->cast(v, choice);
    ++truth[choice];
    if (choice == "A") own_seqs_a.insert(e->processed().back().seq.value());
    e->scan_candidates();
    for (const auto& c : cfg.candidates) EXPECT_EQ(e->candidate(c).running_count(), truth[c]) << c;
  }
  // A keeps only the transactions it opened.
  const auto& opened = e->candidate("A").opened_seqs();
  EXPECT_EQ(std::set<std::uint64_t>(opened.begin(), opened.end()), own_seqs_a);
}

TEST(Candidate, SecretOnlyAfterTrigger) {
  auto e = ready(config(2, {"C1", "C2"}), 22);
  EXPECT_THROW(e->candidate("C1").publish_secret(e->board()), ProtocolError);
}

TEST(Tally, ScriptedVotes) {
  Election e(config(3, {"C1", "C2"}), 23);
  auto r = e.run({{0, "C1"}, {1, "C1"}, {2, "C2"}});
  EXPECT_EQ(r.count_for("C1"), 2u);
  EXPECT_EQ(r.count_for("C2"), 1u);
  EXPECT_EQ(r.unopened, 0u);
  check_report_invariants(r);
  EXPECT_EQ(published_tally(e.board().snapshot()), r);
}

TEST(Tally, Abstention) {
  Election e(config(3, {"C1", "C2"}), 24);
  auto r = e.run({{0, "C1"}, {2, "C2"}});
  EXPECT_EQ(r.total_valid, 2u);
  check_report_invariants(r);
}

TEST(Tally, WithheldKeyLeavesUnopened) {
  auto e = ready(config(4, {"C1", "C2"}), 25);
  e->cast_all({{0, "C1"}, {1, "C2"}, {2, "C2"}, {3, "C1"}});
  e->close_casting();
  e->trigger_tally();
  e->publish_candidate_secrets({"C2"});
  TallyInputs in;
  auto r = compute_tally(e->board().snapshot(), &in);
  EXPECT_EQ(r.count_for("C1"), 2u);
  EXPECT_EQ(r.count_for("C2"), 0u);
  EXPECT_EQ(r.unopened, 2u);
  EXPECT_EQ(in.withheld, std::vector<std::string>{"C2"});
  check_report_invariants(r);
}

TEST(Tally, RequiresTrigger) {
  auto e = ready(config(2, {"C1", "C2"}), 26);
  e->cast(0, "C1");
  e->close_casting();
  try {
    (void)compute_tally(e->board().snapshot());
    FAIL();
  } catch (const ProtocolError& err) {
    EXPECT_EQ(err.code(), "tally-not-triggered");
  }
}

TEST(Tally, RejectionsAggregated) {
  auto e = ready(config(3, {"C1", "C2"}), 27);
  auto bm = e->voter(0).cast(e->public_setup(), "C1");
  e->submit(bm.encode());
  e->submit(bm.encode());
  e->cast(1, "C2");
  finish(*e);
  auto r = e->tally();
  EXPECT_EQ(r.total_valid, 2u);
  EXPECT_EQ(r.rejected.at("reject-used-credential"), 1u);
  EXPECT_EQ(r.rejected_total(), 1u);
}

TEST(Audit, HonestRunAllVerified) {
  auto e = ready(config(4, {"C1", "C2"}, true), 28);
  e->cast_all({{0, "C1"}, {1, "C2"}, {2, "C1"}, {3, "C2"}});
  finish(*e);
  (void)e->tally();
  auto summary = summarize_audit(e->board().snapshot());
  EXPECT_EQ(summary.commitments, 4u);
  EXPECT_FALSE(summary.key_published);
  auto verdicts = e->audit();
  for (const auto& v : verdicts) EXPECT_EQ(v, std::vector<Verdict>{Verdict::kVerified});
  summary = summarize_audit(e->board().snapshot());
  EXPECT_TRUE(summary.key_published);
  EXPECT_EQ(summary.claims, 0u);
}

TEST(Audit, DroppedBallotYieldsOneClaim) {
  auto e = ready(config(4, {"C1", "C2"}, true), 29);
  e->proxy().misbehavior.drop_ballots.insert(e->voter(2).credentials()[0].credential.hash());
  e->cast_all({{0, "C1"}, {1, "C2"}, {2, "C1"}, {3, "C2"}});
  finish(*e);
  EXPECT_EQ(e->tally().total_valid, 3u);
  auto verdicts = e->audit();
  EXPECT_EQ(verdicts[2], std::vector<Verdict>{Verdict::kMissing});
  for (std::uint32_t i : {0u, 1u, 3u}) EXPECT_EQ(verdicts[i], std::vector<Verdict>{Verdict::kVerified});
  EXPECT_EQ(e->board().query(Phase::kAudit, kind::kClaim).size(), 1u);
  // Silent: the proxy kept no rejection record for it.
  EXPECT_TRUE(e->proxy().rejections().empty());
}

TEST(Audit, WrongKeyFailsEveryone) {
  auto e = ready(config(3, {"C1", "C2"}, true), 30);
  e->proxy().misbehavior.publish_wrong_commit_key = true;
  e->cast_all({{0, "C1"}, {1, "C2"}, {2, "C1"}});
  finish(*e);
  (void)e->tally();
  for (const auto& v : e->audit()) EXPECT_EQ(v, std::vector<Verdict>{Verdict::kMissing});
  EXPECT_EQ(e->board().query(Phase::kAudit, kind::kClaim).size(), 3u);
}

TEST(Properties, Completeness) {
  struct Shape {
    std::uint32_t voters, candidates;
  };
  std::uint64_t seed = 100;
  for (auto [nv, nc] : {Shape{2, 2}, Shape{7, 3}, Shape{20, 5}, Shape{40, 10}}) {
    std::vector<std::string> names;
    for (std::uint32_t c = 0; c < nc; ++c) names.push_back("K" + std::to_string(c));
    auto cfg = config(nv, names, false, 1 + nv % 4);
    DeterministicRandom rng(seed);
    std::vector<std::pair<std::uint32_t, std::string>> votes;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (rng.uniform_index(8) == 0) continue;  // abstains
      votes.emplace_back(v, names[rng.uniform_index(nc)]);
    }
    Election e(cfg, seed++);
    auto r = e.run(votes);
    EXPECT_EQ(report_counts(r), script_counts(votes)) << nv << "x" << nc;
    EXPECT_EQ(r.unopened, 0u);
    check_report_invariants(r);
    EXPECT_TRUE(e.board().verify().ok);
  }
}

TEST(Properties, CompletenessAtTwoHundredByTen) {
  std::vector<std::string> names;
  for (int c = 0; c < 10; ++c) names.push_back("K" + std::to_string(c));
  auto cfg = config(200, names, false, 8);
  // Designated-verifier ring capped so that the O(n^2) signature work stays
  // short; the counting path is the same as with the full roll.
  cfg.ring_cap = 16;
  DeterministicRandom rng(200);
  std::vector<std::pair<std::uint32_t, std::string>> votes;
  for (std::uint32_t v = 0; v < 200; ++v) votes.emplace_back(v, names[rng.uniform_index(10)]);
  Election e(cfg, 201);
  auto r = e.run(votes);
  EXPECT_EQ(report_counts(r), script_counts(votes));
  check_report_invariants(r);
}

TEST(Properties, Unreusability) {
  auto e = ready(config(5, {"C1", "C2"}, false, 3), 31);
  DeterministicRandom rng(32);
  std::map<Digest, int> submitted;
  std::vector<Bytes> ballots;
  for (std::uint32_t v = 0; v < 5; ++v) {
    auto copies = 1 + rng.uniform_index(3);
    auto bm = e->voter(v).cast(e->public_setup(), "C1");
    for (std::size_t k = 0; k < copies; ++k) ballots.push_back(bm.encode());
    submitted[bm.cred_hash] += static_cast<int>(copies);
  }
  rng.shuffle(std::span<Bytes>(ballots));
  for (auto& b : ballots) e->submit(b);
  finish(*e);
  auto r = e->tally();
  EXPECT_EQ(r.count_for("C1"), 5u);
  std::map<Digest, int> accepted;
  for (const auto& p : e->processed()) {
    if (p.seq) ++accepted[p.cred_hash];
    else EXPECT_EQ(p.reason, RejectReason::kUsedCredential);
  }
  for (const auto& [h, n] : submitted) EXPECT_EQ(accepted[h], 1);
  // The first submission of each credential is the counted one.
  std::set<Digest> seen;
  for (const auto& p : e->processed()) {
    EXPECT_EQ(p.seq.has_value(), seen.insert(p.cred_hash).second);
  }
}

TEST(Properties, Eligibility) {
  auto e = ready(config(3, {"C1", "C2"}), 33);
  DeterministicRandom rng(34);
  auto outsider = pre::keygen(ctx(), rng);
  for (int i = 0; i < 10; ++i) {
    BallotMessage bm;
    bm.ballot = pre::rekeygen(ctx(), outsider, e->public_setup().candidate("C1")->pk, rng);
    rng.fill(bm.cred_hash);
    e->submit(bm.encode());
  }
  e->cast(0, "C2");
  finish(*e);
  auto r = e->tally();
  EXPECT_EQ(r.count_for("C1"), 0u);
  EXPECT_EQ(r.count_for("C2"), 1u);
  EXPECT_EQ(r.rejected.at("reject-unknown-credential"), 10u);
}

TEST(Properties, ReceiptUnlinkability) {
  auto e = ready(config(2, {"C1", "C2"}), 35);
  auto bm = e->voter(0).cast(e->public_setup(), "C1");
  e->submit(bm.encode());
  finish(*e);
  const auto& held = e->voter(0).credentials()[0];
  auto secrets = e->board().query(std::nullopt, kind::kCandidateSecret);
  std::optional<Scalar> sk2;
  for (const auto& s : secrets) {
    auto rec = CandidateSecretRecord::decode(s.payload);
    if (rec.name == "C1") sk2 = rec.sk2;
  }
  ASSERT_TRUE(sk2);
  DeterministicRandom rng(36);
  const std::uint64_t stp = 1'700'000'000;
  auto m = ctx().encode_timestamp(stp);
  auto delta = pre::enc2(ctx(), held.sk.pub, m, rng);
  std::set<Bytes> seen;
  for (int i = 0; i < 50; ++i) {
    // Fresh proxy randomness: both k (new delta) and w'.
    auto d = i % 2 ? delta : pre::enc2(ctx(), held.sk.pub, m, rng);
    auto tx = pre::reenc(ctx(), bm.ballot, d, rng);
    ASSERT_TRUE(tx);
    EXPECT_TRUE(seen.insert(tx->t1.encode()).second);
    EXPECT_TRUE(seen.insert(tx->t2.encode()).second);
    EXPECT_EQ(pre::dec1(*sk2, *tx), m);
  }
  // The board's own transaction is not among the voter-reproducible ones.
  auto onboard = VotingTransaction::decode(e->board().query(std::nullopt, kind::kTransaction).at(0).payload);
  EXPECT_FALSE(seen.contains(onboard.delta.t1.encode()));
}

TEST(Properties, Strategy1PseudonymKeyNotOnBoard) {
  Election e(config(5, {"C1", "C2"}, true), 37);
  e.run({{0, "C1"}, {1, "C2"}, {2, "C1"}, {3, "C1"}, {4, "C2"}});
  auto entries = e.board().snapshot();
  for (std::uint32_t v = 0; v < 5; ++v) {
    const auto& pk = e.voter(v).credentials()[0].sk.pub;
    for (const auto& field : {pk.encode(), pk.pk1.encode(), pk.pk2.encode()}) {
      for (const auto& en : entries) {
        ASSERT_FALSE(contains(en.payload, field)) << "voter " << v << " entry " << en.seq << " " << en.kind;
      }
    }
  }
}

TEST(Properties, CoercionDefence) {
  auto e = ready(config(4, {"C1", "C2"}), 38);
  const auto& setup = e->public_setup();
  for (std::uint32_t v = 0; v < 4; ++v) {
    auto fake = e->voter(v).forge_credential(setup);
    auto cred = decode_credential(fake.credential_bytes, setup.admin.dv, setup.roll);
    EXPECT_TRUE(verify_credential(setup, cred)) << v;
    EXPECT_EQ(fake.credential_bytes.size(), e->voter(v).credentials()[0].credential_bytes.size());
    DeterministicRandom rng(39 + v);
    auto bm = make_ballot(setup, fake.sk, fake.credential_bytes, "C2", rng);
    auto r = e->proxy().process_ballot(e->board(), bm.encode(), e->clock());
    ASSERT_FALSE(r);
    EXPECT_EQ(r.error(), RejectReason::kUnknownCredential);
    e->cast(v, "C1");
  }
  finish(*e);
  auto r = e->tally();
  EXPECT_EQ(r.count_for("C1"), 4u);
  EXPECT_EQ(r.count_for("C2"), 0u);
}

TEST(Properties, VoterFairnessNoCountsBeforeTally) {
  auto e = ready(config(3, {"C1", "C2"}), 40);
  e->cast_all({{0, "C1"}, {1, "C2"}, {2, "C1"}});
  e->close_casting();
  auto entries = e->board().snapshot();
  EXPECT_FALSE(published_tally(entries).has_value());
  EXPECT_TRUE(e->board().query(std::nullopt, kind::kCandidateSecret).empty());
  EXPECT_THROW((void)compute_tally(entries), ProtocolError);
  // Secrets come only after the trigger.
  e->trigger_tally();
  e->publish_candidate_secrets();
  EXPECT_EQ(compute_tally(e->board().snapshot()).total_valid, 3u);
}

TEST(Properties, TimestampsMonotone) {
  Election e(config(6, {"C1", "C2"}, false, 3), 41);
  e.run({{0, "C1"}, {1, "C2"}, {2, "C1"}, {3, "C1"}, {4, "C2"}, {5, "C2"}});
  std::uint64_t prev = 0;
  for (const auto& en : e.board().query(std::nullopt, kind::kTransaction)) {
    auto tx = VotingTransaction::decode(en.payload);
    EXPECT_GT(tx.stp, prev);
    prev = tx.stp;
  }
}

TEST(Properties, KOutOfL) {
  auto cfg = config(3, {"C1", "C2", "C3"});
  cfg.credentials_per_voter = 2;
  Election e(cfg, 42);
  auto r = e.run({{0, "C1"}, {0, "C2"}, {1, "C3"}, {1, "C3"}, {2, "C1"}});
  for (std::uint32_t v = 0; v < 3; ++v) EXPECT_EQ(e.voter(v).credentials().size(), 2u);
  EXPECT_EQ(r.count_for("C1"), 2u);
  EXPECT_EQ(r.count_for("C2"), 1u);
  EXPECT_EQ(r.count_for("C3"), 2u);
}

TEST(Properties, RingCapLimitsVerifiers) {
  auto cfg = config(10, {"C1", "C2"});
  cfg.ring_cap = 3;
  auto e = ready(cfg, 43);
  for (std::uint32_t v = 0; v < 10; ++v) {
    const auto& c = e->voter(v).credentials().at(0).credential;
    EXPECT_EQ(c.verifier_indices.size(), 3u);
    EXPECT_TRUE(std::is_sorted(c.verifier_indices.begin(), c.verifier_indices.end()));
  }
}

TEST(Properties, ConcurrentModeSameTally) {
  auto cfg = config(10, {"C1", "C2", "C3"}, false, 3);
  std::vector<std::pair<std::uint32_t, std::string>> votes;
  for (std::uint32_t v = 0; v < 10; ++v) votes.emplace_back(v, cfg.candidates[v % 3]);
  Election seq(cfg, 44);
  Election par(cfg, 44, true);
  EXPECT_EQ(seq.run(votes), par.run(votes));
  EXPECT_TRUE(par.board().verify().ok);
}

TEST(Messages, RoundTrips) {
  TallyReport r;
  r.counts = {{"C1", 3}, {"C2", 0}};
  r.total_valid = 3;
  r.rejected = {{"reject-used-credential", 2}};
  r.transactions = 3;
  EXPECT_EQ(TallyReport::from_json(r.to_json()), r);
  RejectionSummary s;
  s.counts = {{"reject-unknown-credential", 4}};
  EXPECT_EQ(RejectionSummary::decode(s.encode()).counts, s.counts);
  for (auto reason : {RejectReason::kUnknownCredential, RejectReason::kUsedCredential, RejectReason::kInvalidBallot}) {
    EXPECT_EQ(parse_reject_reason(to_string(reason)), reason);
  }
  EXPECT_THROW(BallotMessage::decode(to_bytes("short")), DecodeError);
}
