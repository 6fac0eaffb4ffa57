#pragma once

// Single-use, unidirectional, key-private proxy re-encryption over the
// bilinear group of group.hpp.
//
//   KeyGen   pk = (Z^a1, g^a2)
//   ReKeyGen rk_{i->j} = (pk_j2^(a_i1 + r), h^r, e(pk_j2, h)^w, Z^w)
//   Enc      (g^k, h^k, m * pk_i1^k)
//   ReEnc    t1 = e(R1, beta) * R3^w',  t2 = gamma * e(alpha, R2) * R4^w'
//   Dec      second level: gamma / e(alpha, h)^a1
//            first level:  t2 / t1^(1/a2)

#include <cstdint>
#include <optional>

#include "laocoon/bytes.hpp"
#include "laocoon/group.hpp"
#include "laocoon/random.hpp"

namespace laocoon::pre {

// One-byte type tags prefixed to every wire encoding in this module.
enum class WireTag : std::uint8_t {
  kReKey = 0x01,
  kCiphertextL2 = 0x02,
  kCiphertextL1 = 0x03,
  kPublicKey = 0x04,
  kSecretKey = 0x05,
};

struct PublicKey {
  GtElement pk1;  // Z^a1
  G1Point pk2;    // g^a2

  static constexpr std::size_t kEncodedSize = 1 + GtElement::kEncodedSize + G1Point::kEncodedSize;
  Bytes encode() const;
  static std::optional<PublicKey> decode(ByteView b);
  bool operator==(const PublicKey&) const = default;
};

struct KeyPair {
  PublicKey pub;
  Scalar sk1;  // a1, nonzero
  Scalar sk2;  // a2, nonzero

  // Encodes only (sk1, sk2); the public half travels separately.
  Bytes encode_secret() const;
  // Pairs a decoded secret with its public key. Throws DecodeError on a
  // malformed or zero secret. Consistency is not checked (see consistent()).
  static KeyPair from_secret(const PublicKey& pub, ByteView secret);
  // pk1 == Z^sk1 && pk2 == g^sk2. Costs one E1 and one E2.
  bool consistent(const GroupContext& ctx) const;
};

struct ReKey {
  G1Point r1;     // pk_j2^(a_i1 + r)
  G2Point r2;     // h^r
  GtElement r3;   // Z^(a_j2 w)
  GtElement r4;   // Z^w

  static constexpr std::size_t kEncodedSize =
      1 + G1Point::kEncodedSize + G2Point::kEncodedSize + 2 * GtElement::kEncodedSize;
  Bytes encode() const;
  static std::optional<ReKey> decode(ByteView b);
  bool operator==(const ReKey&) const = default;
};

struct CiphertextL2 {
  G1Point alpha;    // g^k
  G2Point beta;     // h^k
  GtElement gamma;  // m * Z^(a1 k)

  static constexpr std::size_t kEncodedSize =
      1 + G1Point::kEncodedSize + G2Point::kEncodedSize + GtElement::kEncodedSize;
  Bytes encode() const;
  static std::optional<CiphertextL2> decode(ByteView b);
  bool operator==(const CiphertextL2&) const = default;
};

struct CiphertextL1 {
  GtElement t1;  // Z^(a_j2 y)
  GtElement t2;  // m * Z^y

  static constexpr std::size_t kEncodedSize = 1 + 2 * GtElement::kEncodedSize;
  Bytes encode() const;
  static std::optional<CiphertextL1> decode(ByteView b);
  bool operator==(const CiphertextL1&) const = default;
};

KeyPair keygen(const GroupContext& ctx, RandomSource& rng);

ReKey rekeygen(const GroupContext& ctx, const KeyPair& from, const PublicKey& to, RandomSource& rng);

CiphertextL2 enc2(const GroupContext& ctx, const PublicKey& pk, const GtElement& m, RandomSource& rng);

// e(alpha, h) == e(g, beta). Two pairings.
bool well_formed(const GroupContext& ctx, const CiphertextL2& c);

// nullopt is the scheme's reject symbol: the validity check failed.
std::optional<CiphertextL1> reenc(const GroupContext& ctx, const ReKey& rk, const CiphertextL2& c,
                                  RandomSource& rng);

std::optional<GtElement> dec2(const GroupContext& ctx, const KeyPair& sk, const CiphertextL2& c);

// There is no validity predicate at the first level; some element is
// always returned.
GtElement dec1(const GroupContext& ctx, const KeyPair& sk, const CiphertextL1& c);

// dec1 given only the second secret exponent, as published by a candidate
// at tally time.
GtElement dec1(const Scalar& sk2, const CiphertextL1& c);

}  // namespace laocoon::pre
