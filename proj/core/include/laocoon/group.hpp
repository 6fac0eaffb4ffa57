#pragma once

// Bilinear group used by every cryptographic module: BLS12-381 through blst.
//
// The source group written G in the protocol is realised as G1 for g and all
// keys; h lives in G2 so that every pairing in the scheme has the shape
// e(G1, G2). Serialized element sizes: G1 48 bytes (compressed), G2 96 bytes
// (compressed), GT 576 bytes, scalars 32 bytes, all big-endian.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <blst.h>

#include "laocoon/bytes.hpp"
#include "laocoon/random.hpp"

namespace laocoon {

inline constexpr std::string_view kCurveName = "BLS12-381";

// Integer modulo the prime group order q.
class Scalar {
 public:
  static constexpr std::size_t kEncodedSize = 32;

  Scalar();
  static Scalar from_u64(std::uint64_t v);
  // Reduces an arbitrary-length big-endian integer modulo q.
  static Scalar from_wide_bytes(ByteView be);
  static Scalar random(RandomSource& rng);
  static Scalar random_nonzero(RandomSource& rng);
  // Rejects encodings that are not exactly 32 bytes or not below q.
  static std::optional<Scalar> decode(ByteView be);

  Bytes encode() const;
  bool is_zero() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  // Throws std::domain_error on zero.
  Scalar inverse() const;

  bool operator==(const Scalar& o) const;

  const blst_scalar& raw() const { return v_; }

 private:
  blst_scalar v_;
};

// Uniform-looking, deterministic map from bytes to [0, q).
Scalar hash_to_scalar(ByteView data);

class G1Point {
 public:
  static constexpr std::size_t kEncodedSize = 48;

  G1Point();  // identity
  static G1Point identity() { return {}; }
  static G1Point generator();

  // Counted as one exponentiation in G.
  G1Point pow(const Scalar& k) const;
  G1Point operator*(const G1Point& o) const;  // group operation

  bool is_identity() const;
  bool operator==(const G1Point& o) const;

  Bytes encode() const;
  // Validates curve membership, subgroup membership and canonical form.
  static std::optional<G1Point> decode(ByteView b);

  blst_p1_affine affine() const;

 private:
  blst_p1 p_;
};

class G2Point {
 public:
  static constexpr std::size_t kEncodedSize = 96;

  G2Point();  // identity
  static G2Point identity() { return {}; }
  static G2Point generator();
  static G2Point hash_to_group(ByteView msg, std::string_view dst);

  // Counted as one exponentiation in G.
  G2Point pow(const Scalar& k) const;
  G2Point operator*(const G2Point& o) const;

  bool is_identity() const;
  bool operator==(const G2Point& o) const;

  Bytes encode() const;
  static std::optional<G2Point> decode(ByteView b);

  blst_p2_affine affine() const;

 private:
  blst_p2 p_;
};

// Element of the order-q target group. Every instance is in the group:
// constructed by a pairing, by group operations, or by validated decoding.
class GtElement {
 public:
  static constexpr std::size_t kEncodedSize = 576;

  GtElement();  // one
  static GtElement one() { return {}; }

  // Counted as one exponentiation in GT.
  GtElement pow(const Scalar& k) const;
  GtElement operator*(const GtElement& o) const;
  GtElement operator/(const GtElement& o) const;
  GtElement inverse() const;

  bool is_one() const;
  bool operator==(const GtElement& o) const;

  Bytes encode() const;
  static std::optional<GtElement> decode(ByteView b);

 private:
  friend GtElement pairing(const G1Point&, const G2Point&);
  friend class GroupContext;
  blst_fp12 f_;
};

// Counted as one pairing.
GtElement pairing(const G1Point& p, const G2Point& q);

// Operation counts in the cost model of the efficiency analysis:
// exponentiations in G (E1) and GT (E2), pairings (P), signatures and
// signature verifications.
struct OpCounts {
  std::uint64_t exp_g = 0;
  std::uint64_t exp_gt = 0;
  std::uint64_t pairings = 0;
  std::uint64_t sigs = 0;
  std::uint64_t vfys = 0;

  OpCounts& operator+=(const OpCounts& o);
  OpCounts operator+(const OpCounts& o) const;
  OpCounts operator-(const OpCounts& o) const;
  bool operator==(const OpCounts&) const = default;
};

std::string to_string(const OpCounts& c);

// RAII counting scope bound to the current thread. Scopes nest; every
// active scope on the thread observes each operation.
class OpCounter {
 public:
  OpCounter();
  ~OpCounter();
  OpCounter(const OpCounter&) = delete;
  OpCounter& operator=(const OpCounter&) = delete;

  const OpCounts& counts() const { return counts_; }

 private:
  friend void count_operation(std::uint64_t OpCounts::*field);
  OpCounts counts_;
  OpCounter* parent_;
};

// Suspends E1/E2/P counting on this thread, so that composite operations
// (signatures) are recorded as a single Sig or Vfy.
class UncountedScope {
 public:
  UncountedScope();
  ~UncountedScope();
  UncountedScope(const UncountedScope&) = delete;
  UncountedScope& operator=(const UncountedScope&) = delete;
};

void count_operation(std::uint64_t OpCounts::*field);

// Immutable public parameters (g, h, q, G, GT, e, Z). Cheap to copy and safe
// to share across threads.
class GroupContext {
 public:
  static constexpr std::size_t kTimestampBits = 64;

  // Deterministic for a fixed tag. h is hashed to the group from the tag, so
  // its discrete logarithm base g is unknown. Throws on an empty tag.
  static GroupContext setup(std::string_view security_tag);

  const std::string& tag() const;
  const G1Point& g() const;
  const G2Point& h() const;
  const GtElement& z() const;

  // Z^t computed as a product of precomputed squares Z^(2^i); no
  // exponentiation is counted.
  GtElement encode_timestamp(std::uint64_t t) const;

  // Board "params" payload. decode() recomputes the parameters from the tag
  // and throws DecodeError if the published elements disagree.
  Bytes encode() const;
  static GroupContext decode(ByteView b);

  bool operator==(const GroupContext& o) const;

 private:
  struct Data;
  explicit GroupContext(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

}  // namespace laocoon
