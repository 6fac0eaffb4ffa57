#pragma once

// Drives one election through its phases with in-process entities. The
// orchestrator only moves messages; every protocol decision is taken by the
// entity that owns the state.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "laocoon/bulletin.hpp"
#include "laocoon/group.hpp"
#include "laocoon/protocol/config.hpp"
#include "laocoon/protocol/entities.hpp"
#include "laocoon/protocol/messages.hpp"
#include "laocoon/random.hpp"

namespace laocoon::protocol {

struct CostCell {
  OpCounts ops;
  std::uint64_t events = 0;
  double seconds = 0;
  std::uint64_t bytes = 0;  // serialized output of the measured step
};

// Costs keyed by (phase, entity), e.g. ("cast", "proxy").
class CostLedger {
 public:
  using Key = std::pair<std::string, std::string>;

  void add(const std::string& phase, const std::string& entity, const OpCounts& ops, double seconds,
           std::uint64_t bytes, std::uint64_t events = 1);
  CostCell get(const std::string& phase, const std::string& entity) const;
  const std::map<Key, CostCell>& cells() const { return cells_; }

 private:
  mutable std::mutex mu_;
  std::map<Key, CostCell> cells_;
};

struct ProcessedBallot {
  Digest cred_hash{};
  std::optional<std::uint64_t> seq;  // transaction entry
  std::optional<RejectReason> reason;
};

class Election {
 public:
  Election(ElectionConfig cfg, std::uint64_t seed, bool concurrent = false);

  const ElectionConfig& config() const { return cfg_; }
  bulletin::BulletinBoard& board() { return board_; }
  const bulletin::BulletinBoard& board() const { return board_; }
  const GroupContext& context() const { return ctx_; }
  const PublicSetup& public_setup() const;

  Administrator& admin() { return *admin_; }
  Proxy& proxy() { return *proxy_; }
  Voter& voter(std::uint32_t i) { return *voters_.at(i); }
  Candidate& candidate(const std::string& name);
  std::vector<std::unique_ptr<Candidate>>& candidates() { return candidates_; }
  CostLedger& costs() { return costs_; }
  const std::vector<ProcessedBallot>& processed() const { return processed_; }
  const std::vector<std::uint64_t>& reissued() const { return reissued_; }
  LogicalClock& clock() { return clock_; }
  RandomSource& adversary_rng() { return *adversary_rng_; }

  // Corrupts an administrator envelope between Steps C4 and C5.
  std::function<void(envelope::HybridCiphertext&, std::uint64_t serial)> in_transit;

  // S1-S2.
  void setup();
  // C1-C7 for every credential, then the credential list to the proxy. A
  // credential whose envelope the proxy rejects is discarded and reissued.
  void dispatch();
  void open_casting();
  // B3-B5 for voter `voter`; the ballot goes through the mix.
  void cast(std::uint32_t voter, const std::string& candidate, std::size_t which = 0);
  // Several casts; in concurrent mode the ballots are generated in parallel.
  void cast_all(const std::vector<std::pair<std::uint32_t, std::string>>& votes);
  // Anonymous submission of an arbitrary ballot message.
  void submit(Bytes ballot_payload);
  void flush_mix();
  // Every candidate scans the board for its new transactions.
  void scan_candidates();
  // Flushes the mix, runs a final scan and publishes the rejection summary.
  void close_casting();
  void trigger_tally();
  void publish_candidate_secrets(const std::set<std::string>& withheld = {});
  TallyReport tally();
  // Commit key publication and one verdict list per voter.
  std::vector<std::vector<Verdict>> audit();

  // Runs every phase with one ballot per (voter, candidate) pair.
  TallyReport run(const std::vector<std::pair<std::uint32_t, std::string>>& votes);

 private:
  void process_released(std::vector<Bytes> batch);

  ElectionConfig cfg_;
  bool concurrent_;
  DeterministicRandom root_;
  GroupContext ctx_;
  bulletin::BulletinBoard board_;
  std::unique_ptr<Administrator> admin_;
  std::unique_ptr<Proxy> proxy_;
  std::vector<std::unique_ptr<Voter>> voters_;
  std::vector<std::unique_ptr<Candidate>> candidates_;
  std::unique_ptr<MixChannel> mix_;
  std::unique_ptr<RandomSource> adversary_rng_;
  std::optional<PublicSetup> setup_;
  LogicalClock clock_;
  CostLedger costs_;
  std::vector<ProcessedBallot> processed_;
  std::vector<std::uint64_t> reissued_;
};

}  // namespace laocoon::protocol
