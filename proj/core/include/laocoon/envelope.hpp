#pragma once

// KEM-DEM hybrid encryption over the proxy re-encryption scheme, and the
// hash commitment used for individual verifiability.
//
// The KEM encrypts a fresh m = Z^s; the DEM is AES-256-GCM under
// SHA-256(tag || encode(m)). Re-encryption transforms only the KEM part.

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>

#include "laocoon/bytes.hpp"
#include "laocoon/expected.hpp"
#include "laocoon/group.hpp"
#include "laocoon/hash.hpp"
#include "laocoon/pre.hpp"
#include "laocoon/random.hpp"

namespace laocoon::envelope {

enum class Level : std::uint8_t { kFirst = 1, kSecond = 2 };

struct HybridCiphertext {
  std::variant<pre::CiphertextL2, pre::CiphertextL1> kem;
  Bytes dem;

  Level level() const { return kem.index() == 0 ? Level::kSecond : Level::kFirst; }

  // level tag, kem bytes, u32 dem length, dem bytes.
  Bytes encode() const;
  static std::optional<HybridCiphertext> decode(ByteView b);
};

enum class OpenError {
  kKemInvalid,     // second-level validity check failed
  kDemAuthFailed,  // wrong key or tampered payload
};

std::string_view to_string(OpenError e);

// Throws std::invalid_argument on an empty payload.
HybridCiphertext hybrid_enc(const GroupContext& ctx, const pre::PublicKey& pk, ByteView payload,
                            RandomSource& rng);

// nullopt when the input is already first level or fails the validity check.
std::optional<HybridCiphertext> hybrid_reenc(const GroupContext& ctx, const pre::ReKey& rk,
                                             const HybridCiphertext& c, RandomSource& rng);

Expected<Bytes, OpenError> hybrid_dec(const GroupContext& ctx, const pre::KeyPair& sk,
                                      const HybridCiphertext& c);

// Bit commitment xi_k(payload) = SHA-256(k || payload).
using CommitKey = std::array<std::uint8_t, 32>;

struct Commitment {
  Digest digest{};
  bool operator==(const Commitment&) const = default;
};

CommitKey random_commit_key(RandomSource& rng);
Commitment commit(const CommitKey& k, ByteView payload);
bool verify_commit(const Commitment& c, const CommitKey& k, ByteView payload);

}  // namespace laocoon::envelope
