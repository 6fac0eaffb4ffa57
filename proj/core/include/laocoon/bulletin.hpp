#pragma once

// Append-only, hash-chained bulletin board.
//
//   entry_hash = SHA-256(u64 seq || u8 phase || str kind || blob payload || prev_hash)
//
// Entry 0 chains from genesis_hash(). The chain makes edits and reordering
// evident; dropping trailing entries is only detectable against a head hash
// remembered out of band.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "laocoon/bytes.hpp"
#include "laocoon/hash.hpp"

namespace laocoon::bulletin {

enum class Phase : std::uint8_t { kSetup = 0, kDispatch, kCast, kOpen, kTally, kAudit };

std::string_view to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view s);

// Message discriminators used by the protocol.
namespace kind {
inline constexpr std::string_view kParams = "params";
inline constexpr std::string_view kHashSpec = "hash-spec";
inline constexpr std::string_view kAdminCert = "admin-cert";
inline constexpr std::string_view kVoterRoll = "voter-roll";
inline constexpr std::string_view kRekeyList = "rekey-list";
inline constexpr std::string_view kCandidateKey = "candidate-key";
inline constexpr std::string_view kPhaseOpen = "phase-open";
inline constexpr std::string_view kBallot = "ballot";
inline constexpr std::string_view kTransaction = "transaction";
inline constexpr std::string_view kRejectionSummary = "rejection-summary";
inline constexpr std::string_view kTallyTrigger = "tally-trigger";
inline constexpr std::string_view kCandidateSecret = "candidate-secret";
inline constexpr std::string_view kTallyResult = "tally-result";
inline constexpr std::string_view kCommitKey = "commit-key";
inline constexpr std::string_view kClaim = "claim";
}  // namespace kind

struct Entry {
  std::uint64_t seq = 0;
  Phase phase = Phase::kSetup;
  std::string kind;
  Bytes payload;
  Digest prev_hash{};
  Digest entry_hash{};

  bool operator==(const Entry&) const = default;
};

Digest genesis_hash();
Digest compute_entry_hash(std::uint64_t seq, Phase phase, std::string_view kind, ByteView payload,
                          const Digest& prev_hash);

class BoardError : public std::runtime_error {
 public:
  enum class Code { kPhaseRegression, kPayloadTooLarge, kEmptyKind, kMalformedFile, kChainInvalid, kIo };

  BoardError(Code code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  Code code() const { return code_; }
  // 1-based file line for load errors, 0 otherwise.
  std::size_t line() const { return line_; }

 private:
  Code code_;
  std::size_t line_;
};

struct ChainCheck {
  bool ok = true;
  std::uint64_t first_bad_seq = 0;
  std::string reason;

  static ChainCheck accept() { return {}; }
  static ChainCheck reject(std::uint64_t seq, std::string why) { return {false, seq, std::move(why)}; }
};

ChainCheck verify_chain(const std::vector<Entry>& entries);

inline constexpr std::string_view kFileHeader = "laocoon-board v1";

// Parses the line format without checking the chain. Throws BoardError
// (kMalformedFile) naming the offending line.
std::vector<Entry> parse_entries(std::string_view text);
std::vector<Entry> read_entries(const std::filesystem::path& path);

class BulletinBoard {
 public:
  static constexpr std::size_t kMaxPayload = 1u << 20;

  BulletinBoard() = default;
  BulletinBoard(const BulletinBoard& o);
  BulletinBoard& operator=(const BulletinBoard& o);

  // Single-writer append. Throws BoardError on phase regression, an
  // oversized payload or an empty kind.
  std::uint64_t append(Phase phase, std::string_view kind, ByteView payload);

  // Order-preserving filtered copy.
  std::vector<Entry> query(std::optional<Phase> phase = std::nullopt,
                           std::optional<std::string_view> kind = std::nullopt) const;
  std::vector<Entry> snapshot() const;
  // Entries since `from_seq`, inclusive.
  std::vector<Entry> since(std::uint64_t from_seq, std::optional<std::string_view> kind = std::nullopt) const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  Digest head_hash() const;
  std::optional<Phase> current_phase() const;

  ChainCheck verify() const;

  std::string serialize() const;
  void persist(const std::filesystem::path& path) const;
  // Rejects malformed, truncated or chain-invalid files.
  static BulletinBoard parse(std::string_view text);
  static BulletinBoard load(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

}  // namespace laocoon::bulletin
