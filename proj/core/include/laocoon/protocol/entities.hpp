#pragma once

// Protocol entities as message-driven state machines. Each entity owns its
// keys, its randomness stream and its private state; the only shared medium
// is the bulletin board, whose appends are serialized by the board itself.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "laocoon/bulletin.hpp"
#include "laocoon/envelope.hpp"
#include "laocoon/expected.hpp"
#include "laocoon/group.hpp"
#include "laocoon/mdvs.hpp"
#include "laocoon/pre.hpp"
#include "laocoon/protocol/config.hpp"
#include "laocoon/protocol/messages.hpp"
#include "laocoon/random.hpp"

namespace laocoon::protocol {

// Protocol-layer failure tagged with the step that raised it, e.g.
// "B6: reject-used-credential".
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string step, std::string code, const std::string& detail = {});

  const std::string& step() const { return step_; }
  const std::string& code() const { return code_; }

 private:
  std::string step_;
  std::string code_;
};

// Everything a participant learns from the setup phase of the board.
struct PublicSetup {
  GroupContext ctx = GroupContext::setup("laocoon-v1");
  AdminCert admin;
  VoterRoll roll;
  std::vector<CandidateKeyRecord> candidates;
  std::map<std::uint32_t, pre::ReKey> rekeys;

  const CandidateKeyRecord* candidate(std::string_view name) const;

  // Throws ProtocolError("S1", ...) when parameters are missing or the
  // administrator certificate does not verify.
  static PublicSetup read(const bulletin::BulletinBoard& board);
  static PublicSetup from_entries(const std::vector<bulletin::Entry>& entries);
};

// Step B2 check, usable by voters and by any coerced party holding a
// credential: the signature ring must be [y_A] + roll members and the
// signature over PK_i must verify.
bool verify_credential(const PublicSetup& setup, const Credential& credential);

// Steps B3-B4 for any holder of (SK_i, sigma_i).
BallotMessage make_ballot(const PublicSetup& setup, const pre::KeyPair& sk, ByteView credential_bytes,
                          std::string_view candidate, RandomSource& rng);

// Monotone logical timestamps.
class LogicalClock {
 public:
  explicit LogicalClock(std::uint64_t start) : next_(start) {}
  std::uint64_t tick() { return next_++; }
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

class Administrator {
 public:
  Administrator(GroupContext ctx, std::unique_ptr<RandomSource> rng);

  const pre::PublicKey& enc_public() const { return enc_.pub; }
  const G1Point& dv_public() const { return dv_.y; }

  // Step S1: params, hash spec, certificate, voter roll and one rekey-list
  // entry per voter. Throws ProtocolError("S1", "duplicate-setup") on a
  // non-empty board.
  void setup(bulletin::BulletinBoard& board, const ElectionConfig& cfg, const VoterRoll& roll);

  void open_phase(bulletin::BulletinBoard& board, bulletin::Phase phase);
  // Tally date: separates the phases and asks candidates for their keys.
  void trigger_tally(bulletin::BulletinBoard& board);

  struct Issued {
    std::uint64_t serial = 0;
    envelope::HybridCiphertext envelope;  // c_i under y_A
  };
  // Steps C1-C4.
  Issued issue_credential();
  // Drops a credential whose envelope the proxy rejected.
  void discard(std::uint64_t serial);
  std::size_t live_credentials() const { return live_.size(); }

  // Enc_{y_P}(L_sigma).
  envelope::HybridCiphertext seal_credential_list(const pre::PublicKey& proxy) const;

 private:
  GroupContext ctx_;
  std::unique_ptr<RandomSource> rng_;
  pre::KeyPair enc_;
  mdvs::DvKeyPair dv_;
  ElectionConfig cfg_;
  VoterRoll roll_;
  std::uint64_t next_serial_ = 0;
  std::map<std::uint64_t, Bytes> live_;
};

struct CredentialRow {
  Bytes credential;  // sigma_i
  pre::PublicKey pk;
  bool used = false;
};

// The proxy's hash table of credentials. A row flips to used exactly once.
class CredentialTable {
 public:
  void insert(const Digest& hash, CredentialRow row);
  const CredentialRow* find(const Digest& hash) const;
  // Throws std::logic_error if absent or already used.
  void mark_used(const Digest& hash);
  std::size_t size() const { return rows_.size(); }
  std::size_t used_count() const;

 private:
  std::map<Digest, CredentialRow> rows_;
};

struct RejectionRecord {
  Digest cred_hash{};
  RejectReason reason;
};

class Proxy {
 public:
  Proxy(GroupContext ctx, std::unique_ptr<RandomSource> rng, bool audit_enabled);

  const pre::PublicKey& enc_public() const { return enc_.pub; }

  // Reads L_k and prepares the pool of unused voter indices (each voter
  // appears credentials_per_voter times).
  void load_setup(const PublicSetup& setup, const ElectionConfig& cfg);

  struct Delivery {
    std::uint32_t voter_index = 0;
    envelope::HybridCiphertext envelope;  // c_i' under y_Vj
  };
  enum class DispatchFailure { kReencReject };
  // Steps C5-C7. Throws ProtocolError("C5", "exhausted-index") when every
  // index is used. A rejected envelope does not consume an index.
  Expected<Delivery, DispatchFailure> forward_credential(const envelope::HybridCiphertext& c);

  // Decrypts L_sigma and builds the credential table.
  void load_credential_table(const envelope::HybridCiphertext& sealed);

  // Steps B6-B9 for one released ballot. Returns the transaction's board
  // seq or the rejection reason (kept proxy-local).
  Expected<std::uint64_t, RejectReason> process_ballot(bulletin::BulletinBoard& board, ByteView ballot_payload,
                                                       LogicalClock& clock);

  // Publishes aggregate rejection counts.
  void close_casting(bulletin::BulletinBoard& board);
  // Reveals the commitment key (audit extension).
  void publish_commit_key(bulletin::BulletinBoard& board);

  const CredentialTable& table() const { return table_; }
  const std::vector<RejectionRecord>& rejections() const { return rejections_; }
  const std::optional<envelope::CommitKey>& commit_key() const { return commit_key_; }
  const std::vector<std::uint32_t>& assignments() const { return assignments_; }

  // Fault injection for audit scenarios.
  struct Misbehavior {
    std::set<Digest> drop_ballots;  // silently discarded, no record
    bool publish_wrong_commit_key = false;
  };
  Misbehavior misbehavior;

 private:
  GroupContext ctx_;
  std::unique_ptr<RandomSource> rng_;
  pre::KeyPair enc_;
  std::map<std::uint32_t, pre::ReKey> rekeys_;
  std::vector<std::uint32_t> unused_;
  std::vector<std::uint32_t> assignments_;
  CredentialTable table_;
  std::vector<RejectionRecord> rejections_;
  std::optional<envelope::CommitKey> commit_key_;
};

enum class ReceiveError { kKemInvalid, kDemAuthFailed, kMalformed, kInvalidCredential };
std::string_view to_string(ReceiveError e);

enum class Verdict { kVerified, kMissing };

class Voter {
 public:
  Voter(std::uint32_t index, GroupContext ctx, std::unique_ptr<RandomSource> rng);

  std::uint32_t index() const { return index_; }
  VoterPublic public_identity() const { return {enc_.pub, dv_.y}; }

  struct Held {
    pre::KeyPair sk;  // SK_i
    Credential credential;
    Bytes credential_bytes;
    bool cast = false;
    Bytes last_ballot;  // the voter's own copy of its latest ballot message
  };

  // Steps B1-B2. On an invalid credential the voter records a denunciation
  // and aborts for that credential.
  Expected<std::size_t, ReceiveError> receive(const PublicSetup& setup, const envelope::HybridCiphertext& c);

  // Steps B3-B4 with held credential `which`. Throws
  // ProtocolError("B3", "unknown-candidate").
  BallotMessage cast(const PublicSetup& setup, std::string_view candidate, std::size_t which = 0);

  struct FakeCredential {
    pre::KeyPair sk;
    Bytes credential_bytes;
  };
  // Coercion defence: a credential for a fresh pseudonym whose signature is
  // forged with this voter's designated-verifier key.
  FakeCredential forge_credential(const PublicSetup& setup, std::size_t which = 0);

  // Recomputes the commitment of every cast credential and looks for it on
  // the board; files a claim for each one missing.
  std::vector<Verdict> audit(bulletin::BulletinBoard& board);

  const std::vector<Held>& credentials() const { return held_; }
  const std::vector<std::string>& denunciations() const { return denunciations_; }
  RandomSource& rng() { return *rng_; }

 private:
  std::uint32_t index_;
  GroupContext ctx_;
  std::unique_ptr<RandomSource> rng_;
  pre::KeyPair enc_;
  mdvs::DvKeyPair dv_;
  std::vector<Held> held_;
  std::vector<std::string> denunciations_;
};

class Candidate {
 public:
  Candidate(std::string name, GroupContext ctx, std::unique_ptr<RandomSource> rng);

  const std::string& name() const { return name_; }
  const pre::PublicKey& enc_public() const { return enc_.pub; }

  // Step S2.
  void publish_key(bulletin::BulletinBoard& board) const;

  // Opens every transaction published since the last scan; a transaction
  // counts iff dec1 yields Z^Stp. Outputs of non-matching decryptions are
  // discarded. Returns the running count.
  std::uint64_t scan(const bulletin::BulletinBoard& board);
  std::uint64_t running_count() const { return opened_.size(); }
  const std::vector<std::uint64_t>& opened_seqs() const { return opened_; }
  std::uint64_t scanned_transactions() const { return scanned_; }

  // Publishes {x_C, C_j} once the tally trigger is on the board.
  void publish_secret(bulletin::BulletinBoard& board) const;

 private:
  std::string name_;
  GroupContext ctx_;
  pre::KeyPair enc_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scanned_ = 0;
  std::vector<std::uint64_t> opened_;
};

// Anonymous channel model: submissions carry no sender identity, are
// batched, and each full batch is released in shuffled order.
class MixChannel {
 public:
  MixChannel(std::uint32_t window, std::unique_ptr<RandomSource> rng);

  // Returns the released batch, empty until the window fills.
  std::vector<Bytes> submit(Bytes ballot_payload);
  std::vector<Bytes> flush();
  std::size_t pending() const { return queue_.size(); }

 private:
  std::uint32_t window_;
  std::unique_ptr<RandomSource> rng_;
  std::vector<Bytes> queue_;
};

}  // namespace laocoon::protocol
