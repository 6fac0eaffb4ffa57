// laocoon: scripted elections, adversarial scenarios, board verification and
// the cost benchmark.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "laocoon/harness.hpp"
#include "laocoon/protocol/tally.hpp"

namespace h = laocoon::harness;
namespace p = laocoon::protocol;

namespace {

struct Common {
  std::string config;
  std::string board;
  std::uint64_t seed = 1;
  std::uint32_t mix_window = 0;
};

h::RunSpec load_spec(const Common& c) {
  auto spec = h::load_config(c.config);
  if (c.mix_window != 0) spec.cfg.mix_window = c.mix_window;
  return spec;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void print_report(const p::TallyReport& r) {
  for (const auto& [name, n] : r.counts) std::cout << "  " << name << ": " << n << "\n";
  std::cout << "  total valid: " << r.total_valid << "\n";
  std::cout << "  unopened: " << r.unopened << "\n";
  for (const auto& [reason, n] : r.rejected) std::cout << "  " << reason << ": " << n << "\n";
}

int cmd_setup(const Common& c) {
  auto spec = load_spec(c);
  p::Election e(spec.cfg, c.seed);
  e.setup();
  e.board().persist(c.board);
  std::cout << "setup: " << e.board().size() << " entries, head " << laocoon::to_hex(e.board().head_hash()) << "\n";
  return 0;
}

int cmd_run(const Common& c, const std::string& report_path, bool concurrent) {
  auto spec = load_spec(c);
  std::optional<std::filesystem::path> board;
  if (!c.board.empty()) board = c.board;
  auto result = h::run_election(spec, c.seed, board, concurrent);
  std::cout << "tally (" << result.votes.size() << " scripted votes, seed " << c.seed << "):\n";
  print_report(result.report);
  if (!result.verdicts.empty()) {
    std::size_t verified = 0, total = 0;
    for (const auto& vs : result.verdicts) {
      for (auto v : vs) {
        ++total;
        if (v == p::Verdict::kVerified) ++verified;
      }
    }
    std::cout << "  audit: " << verified << "/" << total << " ballots verified\n";
  }
  if (!report_path.empty()) write_file(report_path, result.report.to_json() + "\n");
  return 0;
}

int cmd_scenario(const std::vector<std::string>& files, std::uint64_t seed, bool verbose) {
  int failed = 0;
  for (const auto& f : files) {
    auto s = h::load_scenario(f);
    auto out = h::run_scenario(s, seed);
    if (out.pass) {
      std::cout << "PASS " << s.name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL " << s.name << ": " << out.mismatches.front() << "\n";
    }
    if (verbose) {
      for (const auto& l : out.log) std::cout << "  " << l << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}

int cmd_verify(const std::string& board) {
  auto v = h::verify_board(board);
  std::cout << (v.accept ? "accept: " : "reject: ") << v.detail << "\n";
  return v.accept ? 0 : 1;
}

int cmd_bench(const Common& c, const std::string& json_path, std::int64_t voters) {
  auto spec = load_spec(c);
  if (voters >= 0) spec.cfg.num_voters = static_cast<std::uint32_t>(voters);
  auto report = h::bench(spec.cfg, c.seed);
  std::cout << report.to_text();
  if (!json_path.empty()) write_file(json_path, report.to_json() + "\n");
  return report.derived_ok ? 0 : 1;
}

int cmd_audit(const std::string& board) {
  auto entries = laocoon::bulletin::read_entries(board);
  auto chain = laocoon::bulletin::verify_chain(entries);
  if (!chain.ok) {
    std::cout << "reject: chain check failed at seq " << chain.first_bad_seq << ": " << chain.reason << "\n";
    return 1;
  }
  auto s = p::summarize_audit(entries);
  std::cout << "commitment key published: " << (s.key_published ? "yes" : "no") << "\n";
  std::cout << "transactions with commitments: " << s.commitments << "\n";
  std::cout << "claims: " << s.claims << "\n";
  return s.key_published && s.claims == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laocoon receipt-free voting simulator"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config, bool needs_board) {
    sub->add_option("--seed", common.seed, "Randomness seed");
    auto cfg = sub->add_option("-c,--config", common.config, "Config file")->check(CLI::ExistingFile);
    if (needs_config) cfg->required();
    auto board = sub->add_option("-b,--board", common.board, "Board file");
    if (needs_board) board->required();
    sub->add_option("--mix-window", common.mix_window, "Override the config's mix window");
  };

  auto* setup = app.add_subcommand("setup", "Run the setup phase and write the board");
  add_common(setup, true, true);

  std::string report_path;
  bool concurrent = false;
  auto* run = app.add_subcommand("run", "Run a scripted election end to end");
  add_common(run, true, false);
  run->add_option("--report", report_path, "Write the tally report as JSON");
  run->add_flag("--concurrent", concurrent, "Run entities on worker threads (not deterministic)");

  std::vector<std::string> scenario_files;
  bool verbose = false;
  auto* scenario = app.add_subcommand("scenario", "Run scenario files and check their expectations");
  scenario->add_option("files", scenario_files, "Scenario files")->required()->check(CLI::ExistingFile);
  scenario->add_option("--seed", common.seed, "Randomness seed");
  scenario->add_flag("-v,--verbose", verbose, "Print the protocol log");

  auto* verify = app.add_subcommand("verify", "Verify a board file and re-run its tally");
  verify->add_option("board", common.board, "Board file")->required()->check(CLI::ExistingFile);

  std::string json_path;
  std::int64_t bench_voters = -1;
  auto* bench = app.add_subcommand("bench", "Operation-count benchmark against the published cost table");
  add_common(bench, true, false);
  bench->add_option("--json", json_path, "Write the report as JSON");
  bench->add_option("--voters", bench_voters, "Override the number of voters (0 allowed)");

  auto* audit = app.add_subcommand("audit", "Check commitment-key publication and claims on a board");
  audit->add_option("board", common.board, "Board file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*setup) return cmd_setup(common);
    if (*run) return cmd_run(common, report_path, concurrent);
    if (*scenario) return cmd_scenario(scenario_files, common.seed, verbose);
    if (*verify) return cmd_verify(common.board);
    if (*bench) return cmd_bench(common, json_path, bench_voters);
    if (*audit) return cmd_audit(common.board);
  } catch (const std::exception& e) {
    std::cerr << "laocoon: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
