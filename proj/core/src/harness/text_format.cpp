#include <charconv>
#include <fstream>
#include <sstream>

#include "laocoon/harness.hpp"

namespace laocoon::harness {

using protocol::ConfigError;

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(where(line) + "expected a non-negative integer, got '" + s + "'");
  }
  return value;
}

bool parse_flag(const std::string& s, std::size_t line) {
  if (s == "on" || s == "true" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "no") return false;
  throw ConfigError(where(line) + "expected on/off, got '" + s + "'");
}

void need(const std::vector<std::string>& w, std::size_t n, std::size_t line) {
  if (w.size() != n) throw ConfigError(where(line) + "'" + w[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
}

// Applies a config key; returns false if the key is not a config key.
bool apply_config_line(RunSpec& spec, const std::vector<std::string>& w, std::size_t line) {
  auto& cfg = spec.cfg;
  const auto& key = w[0];
  if (key == "voters") {
    need(w, 2, line);
    cfg.num_voters = parse_number<std::uint32_t>(w[1], line);
  } else if (key == "candidates") {
    if (w.size() < 2) throw ConfigError(where(line) + "'candidates' needs at least one name");
    cfg.candidates.assign(w.begin() + 1, w.end());
  } else if (key == "audit") {
    need(w, 2, line);
    cfg.audit_enabled = parse_flag(w[1], line);
  } else if (key == "mix-window") {
    need(w, 2, line);
    cfg.mix_window = parse_number<std::uint32_t>(w[1], line);
  } else if (key == "credentials-per-voter") {
    need(w, 2, line);
    cfg.credentials_per_voter = parse_number<std::uint32_t>(w[1], line);
  } else if (key == "ring-cap") {
    need(w, 2, line);
    cfg.ring_cap = parse_number<std::uint32_t>(w[1], line);
  } else if (key == "group-tag") {
    need(w, 2, line);
    cfg.group_tag = w[1];
  } else if (key == "clock-start") {
    need(w, 2, line);
    cfg.clock_start = parse_number<std::uint64_t>(w[1], line);
  } else if (key == "tally-date") {
    need(w, 2, line);
    cfg.tally_date = w[1];
  } else if (key == "vote") {
    need(w, 3, line);
    spec.votes.push_back({parse_number<std::uint32_t>(w[1], line), w[2]});
  } else {
    return false;
  }
  return true;
}

void check_votes(const RunSpec& spec) {
  for (const auto& v : spec.votes) {
    if (v.voter >= spec.cfg.num_voters) {
      throw ConfigError("vote for voter " + std::to_string(v.voter) + " outside the voter roll");
    }
    if (spec.cfg.candidate_index(v.candidate) == std::string::npos) {
      throw ConfigError("vote for undeclared candidate '" + v.candidate + "'");
    }
  }
}

// Calls fn(words, line_no) for each non-blank line after the header.
template <typename Fn>
void for_each_line(std::string_view text, std::string_view header, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = split_words(line);
    if (w.empty()) continue;
    if (!seen_header) {
      if (line.substr(0, line.find_last_not_of(" \t\r") + 1) != header) {
        throw ConfigError(where(no) + "expected header '" + std::string(header) + "'");
      }
      seen_header = true;
      continue;
    }
    fn(w, no);
  }
  if (!seen_header) throw ConfigError("missing header '" + std::string(header) + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunSpec parse_config(std::string_view text) {
  RunSpec spec;
  for_each_line(text, kConfigHeader, [&](const std::vector<std::string>& w, std::size_t no) {
    if (!apply_config_line(spec, w, no)) throw ConfigError(where(no) + "unknown key '" + w[0] + "'");
  });
  spec.cfg.validate();
  check_votes(spec);
  return spec;
}

RunSpec load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string format_config(const RunSpec& spec) {
  const auto& c = spec.cfg;
  std::ostringstream out;
  out << kConfigHeader << "\n";
  out << "voters " << c.num_voters << "\n";
  out << "candidates";
  for (const auto& n : c.candidates) out << " " << n;
  out << "\n";
  out << "audit " << (c.audit_enabled ? "on" : "off") << "\n";
  out << "mix-window " << c.mix_window << "\n";
  out << "credentials-per-voter " << c.credentials_per_voter << "\n";
  out << "ring-cap " << c.ring_cap << "\n";
  out << "group-tag " << c.group_tag << "\n";
  out << "clock-start " << c.clock_start << "\n";
  out << "tally-date " << c.tally_date << "\n";
  for (const auto& v : spec.votes) out << "vote " << v.voter << " " << v.candidate << "\n";
  return out.str();
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  for_each_line(text, kScenarioHeader, [&](const std::vector<std::string>& w, std::size_t no) {
    if (w[0] == "name") {
      need(w, 2, no);
      s.name = w[1];
    } else if (w[0] == "action") {
      if (w.size() < 2) throw ConfigError(where(no) + "action without a verb");
      s.actions.push_back({w[1], {w.begin() + 2, w.end()}, no});
    } else if (w[0] == "expect") {
      if (w.size() < 2) throw ConfigError(where(no) + "expectation without a subject");
      s.expected.push_back({w[1], {w.begin() + 2, w.end()}, no});
    } else if (!apply_config_line(s.spec, w, no)) {
      throw ConfigError(where(no) + "unknown key '" + w[0] + "'");
    }
  });
  if (s.name.empty()) throw ConfigError("scenario has no name");
  s.spec.cfg.validate();
  check_votes(s.spec);

  const auto& cfg = s.spec.cfg;
  auto voter_arg = [&](const Action& a, std::size_t i) {
    if (a.args.size() <= i) throw ConfigError(where(a.line) + "'" + a.verb + "' needs a voter index");
    auto v = parse_number<std::uint32_t>(a.args[i], a.line);
    if (v >= cfg.num_voters) throw ConfigError(where(a.line) + "voter " + a.args[i] + " outside the voter roll");
  };
  auto candidate_arg = [&](std::size_t line, const std::string& c) {
    if (cfg.candidate_index(c) == std::string::npos) {
      throw ConfigError(where(line) + "undeclared candidate '" + c + "'");
    }
  };
  auto arity = [&](const Action& a, std::size_t lo, std::size_t hi) {
    if (a.args.size() < lo || a.args.size() > hi) {
      throw ConfigError(where(a.line) + "wrong number of arguments for '" + a.verb + "'");
    }
  };
  for (const auto& a : s.actions) {
    const auto& v = a.verb;
    if (v == "cast") {
      arity(a, 2, 3);
      voter_arg(a, 0);
      candidate_arg(a.line, a.args[1]);
      if (a.args.size() == 3) (void)parse_number<std::size_t>(a.args[2], a.line);
    } else if (v == "double-cast") {
      arity(a, 2, 3);
      voter_arg(a, 0);
      for (std::size_t i = 1; i < a.args.size(); ++i) candidate_arg(a.line, a.args[i]);
    } else if (v == "forge-credential-cast" || v == "strategy-1" || v == "strategy-2") {
      arity(a, 2, 2);
      voter_arg(a, 0);
      candidate_arg(a.line, a.args[1]);
    } else if (v == "abstain" || v == "suppress-ballot") {
      arity(a, 1, 1);
      voter_arg(a, 0);
    } else if (v == "coerce-and-forge") {
      arity(a, 3, 3);
      voter_arg(a, 0);
      candidate_arg(a.line, a.args[1]);
      candidate_arg(a.line, a.args[2]);
    } else if (v == "randomize") {
      arity(a, 1, 2);
      voter_arg(a, 0);
      if (a.args.size() == 2) candidate_arg(a.line, a.args[1]);
    } else if (v == "force-abstain") {
      arity(a, 2, 2);
      voter_arg(a, 0);
      candidate_arg(a.line, a.args[1]);
    } else if (v == "withhold-key") {
      arity(a, 1, 1);
      candidate_arg(a.line, a.args[0]);
    } else if (v == "tamper-board") {
      arity(a, 1, 1);
      (void)parse_number<std::uint64_t>(a.args[0], a.line);
    } else if (v == "wrong-commit-key") {
      arity(a, 0, 0);
    } else {
      throw ConfigError(where(a.line) + "unknown action '" + v + "'");
    }
  }
  for (const auto& e : s.expected) {
    const auto& w = e.what;
    auto n_args = [&](std::size_t n) {
      if (e.args.size() != n) throw ConfigError(where(e.line) + "wrong number of arguments for '" + w + "'");
    };
    if (w == "count") {
      n_args(2);
      candidate_arg(e.line, e.args[0]);
      (void)parse_number<std::uint64_t>(e.args[1], e.line);
    } else if (w == "total-valid" || w == "unopened" || w == "transactions" || w == "claims" ||
               w == "denunciations" || w == "chain-reject") {
      n_args(1);
      (void)parse_number<std::uint64_t>(e.args[0], e.line);
    } else if (w == "rejected") {
      n_args(2);
      if (!protocol::parse_reject_reason(e.args[0])) {
        throw ConfigError(where(e.line) + "unknown rejection reason '" + e.args[0] + "'");
      }
      (void)parse_number<std::uint64_t>(e.args[1], e.line);
    } else if (w == "verdicts") {
      n_args(2);
      if (e.args[0] != "verified" && e.args[0] != "missing") {
        throw ConfigError(where(e.line) + "verdicts are 'verified' or 'missing'");
      }
      (void)parse_number<std::uint64_t>(e.args[1], e.line);
    } else if (w == "chain-ok" || w == "coercer-accepts" || w == "receipt-fails") {
      n_args(0);
    } else if (w == "verify") {
      n_args(1);
      if (e.args[0] != "accept" && e.args[0] != "reject") {
        throw ConfigError(where(e.line) + "verify expects accept or reject");
      }
    } else {
      throw ConfigError(where(e.line) + "unknown expectation '" + w + "'");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

}  // namespace laocoon::harness
