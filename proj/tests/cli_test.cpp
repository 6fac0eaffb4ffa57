#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "laocoon/bulletin.hpp"
#include "laocoon/harness.hpp"
#include "laocoon/protocol/tally.hpp"

using namespace laocoon;
using namespace laocoon::harness;
using protocol::ConfigError;
namespace kind = laocoon::bulletin::kind;

namespace {

const std::filesystem::path kSource = LAOCOON_SOURCE_DIR;

RunSpec small_spec() {
  return parse_config(
      "laocoon-config v1\n"
      "voters 3\n"
      "candidates C1 C2\n"
      "vote 0 C1\n"
      "vote 1 C1\n"
      "vote 2 C2\n");
}

std::string expect_config_error(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return {};
}

// Rebuilds a board from entries, re-chaining every hash, so that edits are
// not caught by the chain check.
std::string rechain(const std::vector<bulletin::Entry>& entries) {
  bulletin::BulletinBoard b;
  for (const auto& e : entries) b.append(e.phase, e.kind, e.payload);
  return b.serialize();
}

}  // namespace

TEST(ConfigFormat, ParsesAndFormats) {
  auto spec = small_spec();
  EXPECT_EQ(spec.cfg.num_voters, 3u);
  EXPECT_EQ(spec.cfg.candidates, (std::vector<std::string>{"C1", "C2"}));
  EXPECT_EQ(spec.votes.size(), 3u);
  auto again = parse_config(format_config(spec));
  EXPECT_EQ(format_config(again), format_config(spec));
  EXPECT_EQ(again.votes, spec.votes);
}

TEST(ConfigFormat, CommentsAndDefaults) {
  auto spec = parse_config("# leading comment\nlaocoon-config v1\nvoters 5  # five\ncandidates A B C\n\n");
  EXPECT_EQ(spec.cfg.num_voters, 5u);
  EXPECT_EQ(spec.cfg.mix_window, 1u);
  EXPECT_FALSE(spec.cfg.audit_enabled);
  EXPECT_TRUE(spec.votes.empty());
}

TEST(ConfigFormat, Errors) {
  EXPECT_NE(expect_config_error("laocoon-config v2\nvoters 1\n").find("header"), std::string::npos);
  EXPECT_NE(expect_config_error("laocoon-config v1\ncandidates A B\ncolour red\n").find("line 3"), std::string::npos);
  EXPECT_NE(expect_config_error("laocoon-config v1\nvoters -1\ncandidates A B\n").find("line 2"), std::string::npos);
  EXPECT_NE(expect_config_error("laocoon-config v1\nvoters 2\ncandidates A B\nvote 2 A\n").find("outside"),
            std::string::npos);
  EXPECT_NE(expect_config_error("laocoon-config v1\nvoters 2\ncandidates A B\nvote 1 Z\n").find("undeclared"),
            std::string::npos);
  expect_config_error("laocoon-config v1\nvoters 2\ncandidates A\n");
  expect_config_error("");
}

TEST(ScenarioFormat, Validation) {
  auto base = std::string("laocoon-scenario v1\nname t\nvoters 2\ncandidates YES NO\n");
  EXPECT_NO_THROW(parse_scenario(base + "action cast 0 YES\nexpect count YES 1\n"));
  EXPECT_THROW(parse_scenario(base + "action cast 2 YES\n"), ConfigError);
  EXPECT_THROW(parse_scenario(base + "action cast 0 MAYBE\n"), ConfigError);
  EXPECT_THROW(parse_scenario(base + "expect count MAYBE 1\n"), ConfigError);
  EXPECT_THROW(parse_scenario(base + "action dance 0\n"), ConfigError);
  EXPECT_THROW(parse_scenario(base + "expect rejected reject-bored 1\n"), ConfigError);
  EXPECT_THROW(parse_scenario("laocoon-scenario v1\nvoters 2\ncandidates A B\n"), ConfigError);
}

TEST(ScenarioRun, FailureShowsFirstMismatch) {
  auto s = parse_scenario(
      "laocoon-scenario v1\nname wrong\nvoters 2\ncandidates YES NO\n"
      "action cast 0 YES\naction cast 1 NO\n"
      "expect count YES 1\nexpect count NO 2\nexpect total-valid 5\n");
  auto out = run_scenario(s, 1);
  EXPECT_FALSE(out.pass);
  ASSERT_EQ(out.mismatches.size(), 2u);
  EXPECT_NE(out.mismatches[0].find("line 8"), std::string::npos) << out.mismatches[0];
}

TEST(ScenarioRun, ShippedScenariosPass) {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kSource / "scenarios")) {
    if (entry.path().extension() != ".scenario") continue;
    auto out = run_scenario(load_scenario(entry.path()), 1);
    EXPECT_TRUE(out.pass) << entry.path().filename() << ": "
                          << (out.mismatches.empty() ? "" : out.mismatches.front());
    ++n;
  }
  EXPECT_GE(n, 10);
}

TEST(ScenarioRun, DoubleCastLogsStep) {
  auto out = run_scenario(load_scenario(kSource / "scenarios/double-cast.scenario"), 1);
  ASSERT_TRUE(out.pass);
  bool found = false;
  for (const auto& l : out.log) found |= l.rfind("B6: reject-used-credential", 0) == 0;
  EXPECT_TRUE(found);
}

TEST(RunElection, ScriptedThreeVoters) {
  auto r = run_election(small_spec(), 1);
  EXPECT_EQ(r.report.count_for("C1"), 2u);
  EXPECT_EQ(r.report.count_for("C2"), 1u);
}

TEST(RunElection, Deterministic) {
  auto spec = small_spec();
  spec.cfg.audit_enabled = true;
  auto a = run_election(spec, 9);
  auto b = run_election(spec, 9);
  auto c = run_election(spec, 10);
  EXPECT_EQ(a.board_text, b.board_text);
  EXPECT_NE(a.board_text, c.board_text);
}

TEST(RunElection, WritesBoardFile) {
  auto path = std::filesystem::temp_directory_path() / "laocoon-cli-test.board";
  auto r = run_election(small_spec(), 2, path);
  EXPECT_EQ(bulletin::BulletinBoard::load(path).serialize(), r.board_text);
  EXPECT_TRUE(verify_board(path).accept);
}

TEST(RunElection, RandomVotesMatchRecount) {
  auto spec = parse_config("laocoon-config v1\nvoters 30\ncandidates A B C D\nmix-window 4\n");
  for (std::uint64_t seed : {1, 2, 3}) {
    auto r = run_election(spec, seed);
    std::map<std::string, std::uint64_t> want;
    for (const auto& v : random_votes(spec.cfg, seed)) ++want[v.candidate];
    for (const auto& c : spec.cfg.candidates) EXPECT_EQ(r.report.count_for(c), want[c]) << c;
  }
}

TEST(VerifyBoard, HonestAccepts) {
  auto r = run_election(small_spec(), 3);
  auto v = verify_board_text(r.board_text);
  EXPECT_TRUE(v.accept) << v.detail;
  ASSERT_TRUE(v.recount);
  EXPECT_EQ(*v.recount, r.report);
}

TEST(VerifyBoard, EditedTallyNamesCandidate) {
  auto r = run_election(small_spec(), 4);
  auto entries = bulletin::parse_entries(r.board_text);
  auto edited = r.report;
  edited.counts[1].second += 1;  // C2
  edited.total_valid += 1;
  for (auto& e : entries) {
    if (e.kind == kind::kTallyResult) e.payload = to_bytes(edited.to_json());
  }
  auto v = verify_board_text(rechain(entries));
  EXPECT_FALSE(v.accept);
  EXPECT_NE(v.detail.find("C2"), std::string::npos) << v.detail;
  EXPECT_EQ(v.detail.find("C1"), std::string::npos) << v.detail;
}

TEST(VerifyBoard, MissingCandidateKeyExplainedAsUnopened) {
  auto r = run_election(small_spec(), 5);
  auto entries = bulletin::parse_entries(r.board_text);
  std::vector<bulletin::Entry> kept;
  for (const auto& e : entries) {
    if (e.kind == kind::kCandidateKey &&
        protocol::CandidateKeyRecord::decode(e.payload).name == "C1") {
      continue;
    }
    kept.push_back(e);
  }
  auto v = verify_board_text(rechain(kept));
  EXPECT_FALSE(v.accept);
  EXPECT_NE(v.detail.find("opened by no published key"), std::string::npos) << v.detail;
}

TEST(VerifyBoard, TamperedByteRejectedAtIndex) {
  auto r = run_election(small_spec(), 6);
  // seq 9 sits on line 11; its fourth field is the payload.
  auto text = r.board_text;
  std::size_t pos = 0;
  for (int line = 1; line < 11; ++line) pos = text.find('\n', pos) + 1;
  for (int field = 0; field < 3; ++field) pos = text.find('\t', pos) + 1;
  text[pos] = text[pos] == '0' ? '1' : '0';
  auto v = verify_board_text(text);
  EXPECT_FALSE(v.accept);
  ASSERT_TRUE(v.bad_seq);
  EXPECT_EQ(*v.bad_seq, 9u);
}

TEST(VerifyBoard, GarbageRejected) {
  EXPECT_FALSE(verify_board_text("not a board\n").accept);
  EXPECT_FALSE(verify_board(std::filesystem::temp_directory_path() / "laocoon-no-such.board").accept);
}

TEST(Bench, CandidateOpeningIsOneGtExponentiation) {
  auto spec = parse_config("laocoon-config v1\nvoters 6\ncandidates A B C\n");
  auto r = bench(spec.cfg, 1);
  ASSERT_EQ(r.rows.size(), 5u);
  const auto& open = r.rows.back();
  EXPECT_EQ(open.entity, "Candidate");
  EXPECT_EQ(open.events, 6u * 3u);
  EXPECT_TRUE(open.exact);
  EXPECT_EQ(open.measured, (SignedCounts{0, 1, 0, 0, 0, 0}));
  EXPECT_TRUE(r.derived_ok);
}

TEST(Bench, VoterSidePairingCount) {
  auto spec = parse_config("laocoon-config v1\nvoters 4\ncandidates A B\n");
  auto r = bench(spec.cfg, 2);
  const BenchRow* voter = nullptr;
  for (const auto& row : r.rows) {
    if (row.entity == "Voter") voter = &row;
  }
  ASSERT_NE(voter, nullptr);
  EXPECT_EQ(voter->measured.p, 1);
  EXPECT_EQ(voter->measured, voter->derived);
  EXPECT_EQ(voter->measured - voter->published, (SignedCounts{1, -1, 0, 0, 0, 0}));
}

TEST(Bench, EveryRowComparableOrFlagged) {
  auto spec = parse_config("laocoon-config v1\nvoters 3\ncandidates A B\n");
  auto r = bench(spec.cfg, 3);
  for (const auto& row : r.rows) {
    if (row.published.s != 0) {
      EXPECT_FALSE(row.comparable) << row.phase << "/" << row.entity;
      EXPECT_NE(row.note.find("undefined symbol S"), std::string::npos);
    }
    EXPECT_GT(row.measured_bytes, 0u) << row.entity;
  }
  auto json = r.to_json();
  EXPECT_NE(json.find("\"derived_ok\": true"), std::string::npos);
  EXPECT_NE(r.to_text().find("not comparable"), std::string::npos);
}

TEST(Bench, ZeroVoters) {
  protocol::ElectionConfig cfg;
  cfg.num_voters = 0;
  cfg.candidates = {"A", "B"};
  auto r = bench(cfg, 4);
  EXPECT_EQ(r.total, OpCounts{});
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.measured, SignedCounts{});
    EXPECT_EQ(row.events, 0u);
  }
}
