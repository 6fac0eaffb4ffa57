#pragma once

// Wire records exchanged between protocol entities and published on the
// bulletin board. All binary encodings use ByteWriter conventions.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laocoon/bulletin.hpp"
#include "laocoon/envelope.hpp"
#include "laocoon/group.hpp"
#include "laocoon/hash.hpp"
#include "laocoon/mdvs.hpp"
#include "laocoon/pre.hpp"

namespace laocoon::protocol {

// Long-term public identity of a registered voter: the PRE key that
// credentials are re-encrypted to and the designated-verifier key.
struct VoterPublic {
  pre::PublicKey enc;
  G1Point dv;
};

struct VoterRoll {
  std::vector<VoterPublic> voters;

  Bytes encode() const;
  static VoterRoll decode(ByteView b);
};

// Administrator's published keys with a Schnorr self-signature.
struct AdminCert {
  pre::PublicKey enc;
  G1Point dv;
  mdvs::Signature self_sig;

  static Bytes signed_message(const GroupContext& ctx, const pre::PublicKey& enc, const G1Point& dv);
  Bytes encode() const;
  static AdminCert decode(ByteView b);
  bool verify(const GroupContext& ctx) const;
};

struct RekeyRecord {
  std::uint32_t voter_index = 0;
  pre::ReKey rk;

  Bytes encode() const;
  static RekeyRecord decode(ByteView b);
};

struct CandidateKeyRecord {
  std::string name;
  pre::PublicKey pk;

  Bytes encode() const;
  static CandidateKeyRecord decode(ByteView b);
};

// {x_C, C_j}: the second secret exponent suffices to open transactions.
struct CandidateSecretRecord {
  std::string name;
  Scalar sk2;

  Bytes encode() const;
  static CandidateSecretRecord decode(ByteView b);
};

// sigma_i = (PK_i, s_i). The signature ring is [y_A] followed by the
// designated voters, referenced by their index in the voter roll.
struct Credential {
  pre::PublicKey pk;
  std::vector<std::uint32_t> verifier_indices;
  mdvs::Signature sig;

  Bytes encode() const;
  // h_i = H(sigma_i).
  Digest hash() const { return sha256(encode()); }
};

mdvs::Ring credential_ring(const G1Point& admin_dv, const VoterRoll& roll,
                           const std::vector<std::uint32_t>& verifier_indices);

// Throws DecodeError on malformed bytes or out-of-range verifier indices.
Credential decode_credential(ByteView b, const G1Point& admin_dv, const VoterRoll& roll);

// Plaintext of the dispatch envelope: (SK_i, sigma_i).
struct CredentialBundle {
  Bytes secret;
  Bytes credential;

  Bytes encode() const;
  static CredentialBundle decode(ByteView b);
};

// L_sigma as sent to the proxy after dispatch.
Bytes encode_credential_list(const std::vector<Bytes>& credentials);
std::vector<Bytes> decode_credential_list(ByteView b);

// m_l = (Ballot, h_i).
struct BallotMessage {
  pre::ReKey ballot;
  Digest cred_hash{};

  Bytes encode() const;
  static BallotMessage decode(ByteView b);
};

// (delta', Stp [, beta]).
struct VotingTransaction {
  pre::CiphertextL1 delta;
  std::uint64_t stp = 0;
  std::optional<envelope::Commitment> commitment;

  Bytes encode() const;
  static VotingTransaction decode(ByteView b);
  // Reads only the trailing commitment, skipping group-element validation.
  static std::optional<envelope::Commitment> peek_commitment(ByteView b);
};

enum class RejectReason { kUnknownCredential, kUsedCredential, kInvalidBallot };

std::string_view to_string(RejectReason r);
std::optional<RejectReason> parse_reject_reason(std::string_view s);

// Aggregate proxy rejections; per-ballot records stay with the proxy.
struct RejectionSummary {
  std::map<std::string, std::uint64_t> counts;

  Bytes encode() const;
  static RejectionSummary decode(ByteView b);
};

struct TallyReport {
  std::vector<std::pair<std::string, std::uint64_t>> counts;  // candidate order
  std::uint64_t total_valid = 0;
  std::map<std::string, std::uint64_t> rejected;
  std::uint64_t unopened = 0;
  std::uint64_t transactions = 0;

  std::uint64_t count_for(std::string_view candidate) const;
  std::uint64_t rejected_total() const;

  // Canonical JSON text.
  std::string to_json() const;
  static TallyReport from_json(std::string_view text);
  bool operator==(const TallyReport&) const = default;
};

struct Claim {
  envelope::Commitment expected;
  std::string reason;

  Bytes encode() const;
  static Claim decode(ByteView b);
};

Bytes encode_phase_marker(bulletin::Phase p);

}  // namespace laocoon::protocol
