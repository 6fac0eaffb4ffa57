#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace laocoon::protocol {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ElectionConfig {
  std::uint32_t num_voters = 1;              // |L_v|
  std::vector<std::string> candidates;       // L_c, at least two
  bool audit_enabled = false;                // commitment-based individual verifiability
  std::uint32_t mix_window = 1;              // ballots batched before a shuffled release
  std::uint32_t credentials_per_voter = 1;   // k for k-out-of-L voting
  // Designated verifiers per credential signature; 0 designates the whole
  // voter roll.
  std::uint32_t ring_cap = 0;
  std::string group_tag = "laocoon-v1";
  std::uint64_t clock_start = 1'700'000'000;  // first logical timestamp
  std::string tally_date = "tally";           // trigger token

  // Throws ConfigError on violated invariants.
  void validate() const;
  std::size_t candidate_index(const std::string& name) const;  // npos if absent
  std::uint64_t total_credentials() const {
    return std::uint64_t{num_voters} * credentials_per_voter;
  }
};

}  // namespace laocoon::protocol
