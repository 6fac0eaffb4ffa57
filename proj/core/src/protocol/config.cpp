#include "laocoon/protocol/config.hpp"

#include <set>

namespace laocoon::protocol {

void ElectionConfig::validate() const {
  if (num_voters < 1) throw ConfigError("num_voters must be at least 1");
  if (candidates.size() < 2) throw ConfigError("at least two candidates are required");
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (c.empty() || c.find_first_of(" \t\r\n") != std::string::npos) {
      throw ConfigError("candidate identifiers must be non-empty and contain no whitespace");
    }
    if (!seen.insert(c).second) throw ConfigError("duplicate candidate '" + c + "'");
  }
  if (mix_window < 1) throw ConfigError("mix_window must be at least 1");
  if (credentials_per_voter < 1) throw ConfigError("credentials_per_voter must be at least 1");
  if (group_tag.empty()) throw ConfigError("group_tag must be non-empty");
}

std::size_t ElectionConfig::candidate_index(const std::string& name) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == name) return i;
  }
  return std::string::npos;
}

}  // namespace laocoon::protocol
