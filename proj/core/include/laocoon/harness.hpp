#pragma once

// Simulation harness: config and scenario text formats, scripted elections,
// adversarial scenarios, board verification and the cost benchmark.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "laocoon/group.hpp"
#include "laocoon/protocol/config.hpp"
#include "laocoon/protocol/election.hpp"
#include "laocoon/protocol/messages.hpp"

namespace laocoon::harness {

using protocol::ElectionConfig;
using protocol::TallyReport;

// One honest vote of the run script.
struct Vote {
  std::uint32_t voter = 0;
  std::string candidate;
  bool operator==(const Vote&) const = default;
};

// Config file:
//
//   laocoon-config v1
//   voters 100
//   candidates C1 C2 C3
//   audit on
//   mix-window 4
//   vote 0 C1            (optional; without vote lines every voter votes
//                         uniformly at random from the seed)
//
// Other keys: credentials-per-voter, ring-cap, group-tag, clock-start,
// tally-date. '#' starts a comment. Unknown keys are errors.
struct RunSpec {
  ElectionConfig cfg;
  std::vector<Vote> votes;  // empty: random votes
};

inline constexpr std::string_view kConfigHeader = "laocoon-config v1";
inline constexpr std::string_view kScenarioHeader = "laocoon-scenario v1";

// Throws protocol::ConfigError naming the line.
RunSpec parse_config(std::string_view text);
RunSpec load_config(const std::filesystem::path& path);
std::string format_config(const RunSpec& spec);

// Uniform votes for every voter, derived from the seed alone.
std::vector<Vote> random_votes(const ElectionConfig& cfg, std::uint64_t seed);

struct RunResult {
  TallyReport report;
  std::vector<Vote> votes;
  std::string board_text;
  std::vector<std::vector<protocol::Verdict>> verdicts;  // audit only
};

// All phases; writes the board file when a path is given.
RunResult run_election(const RunSpec& spec, std::uint64_t seed,
                       const std::optional<std::filesystem::path>& board_path = std::nullopt,
                       bool concurrent = false);

// Scenario file: the config keys above, then actions and expectations.
//
//   laocoon-scenario v1
//   name double-cast
//   voters 3
//   candidates YES NO
//   action cast 0 YES
//   action double-cast 1 NO
//   expect count YES 1
//   expect rejected reject-used-credential 1
//
// Actions:
//   cast V C [K]                 V casts for C with credential K (default 0)
//   double-cast V C [C2]         casts the same credential twice
//   forge-credential-cast V C    ballot carrying a hash no credential has
//   abstain V
//   coerce-and-forge V C_COERCER C_REAL
//                                V hands a forged credential to the coercer,
//                                who checks it and votes with it; V then votes
//                                with the real credential
//   randomize V [C_REAL]         the coercer submits a ballot for a random
//                                candidate with the forged credential
//   force-abstain V C_REAL       the coercer takes the forged credential and
//                                watches the board; V votes anyway
//   strategy-1 V C               V votes for C and hands over (rk, h_i); the
//                                coercer looks for PK_i on the board
//   strategy-2 V C               V votes for C and hands over its ballot; the
//                                coercer tries to single out V's transaction
//   suppress-ballot V            the proxy silently drops V's next ballot
//   wrong-commit-key             the proxy publishes a wrong commitment key
//   withhold-key C               C never publishes its secret
//   tamper-board SEQ             flips one payload byte of entry SEQ in the
//                                persisted board
//
// Expectations:
//   count C N | total-valid N | unopened N | transactions N
//   rejected REASON N | verdicts verified|missing N | claims N
//   denunciations N | chain-reject SEQ | chain-ok | coercer-accepts
//   receipt-fails
//   verify accept|reject
struct Action {
  std::string verb;
  std::vector<std::string> args;
  std::size_t line = 0;
};

struct Expectation {
  std::string what;
  std::vector<std::string> args;
  std::size_t line = 0;
};

struct Scenario {
  std::string name;
  RunSpec spec;
  std::vector<Action> actions;
  std::vector<Expectation> expected;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioOutcome {
  bool pass = false;
  std::vector<std::string> mismatches;  // first one is the first failed expectation
  TallyReport report;
  std::string board_text;
  std::vector<std::string> log;         // protocol-layer events, e.g. "B6: reject-used-credential"
};

ScenarioOutcome run_scenario(const Scenario& s, std::uint64_t seed);

struct BoardVerdict {
  bool accept = false;
  std::string detail;
  std::optional<std::uint64_t> bad_seq;  // set when the chain breaks
  std::optional<TallyReport> recount;
};

// Chain check, then the tally script re-run from board contents and compared
// with the published report.
BoardVerdict verify_board_text(std::string_view text);
BoardVerdict verify_board(const std::filesystem::path& path);

// Signed operation counts for deltas against the published cost table.
struct SignedCounts {
  std::int64_t e1 = 0, e2 = 0, p = 0, sig = 0, vfy = 0, s = 0;
  static SignedCounts from(const OpCounts& c);
  SignedCounts operator-(const SignedCounts& o) const;
  bool operator==(const SignedCounts&) const = default;
  std::string str() const;
};

struct BenchRow {
  std::string phase;   // table phase, e.g. "Ballot Casting"
  std::string entity;
  std::string published_expr;
  SignedCounts published;     // S counts undefined ops
  SignedCounts derived;       // expected from the scheme as implemented
  SignedCounts measured;      // per vote
  std::uint64_t events = 0;
  bool exact = false;         // measured totals equal derived * events
  bool comparable = true;     // false when the published cell uses S
  std::string note;
  std::string published_size_expr;
  std::uint64_t published_size_bytes = 0;  // published expression with this curve's sizes
  std::uint64_t measured_bytes = 0;    // mean serialized size per message
  double ms_per_event = 0;
};

struct BenchReport {
  std::uint32_t voters = 0;
  std::uint32_t candidates = 0;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
  OpCounts total;        // every counted op in the run
  double voter_ballot_ms = 0;  // ballot generation only
  bool derived_ok = false;     // every row exact

  std::string to_text() const;
  std::string to_json() const;
};

// Instruments one full election. A zero-voter config yields zero cells.
BenchReport bench(const ElectionConfig& cfg, std::uint64_t seed);

}  // namespace laocoon::harness
