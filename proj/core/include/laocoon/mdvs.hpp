#pragma once

// Multi-designated-verifier signatures as a 1-out-of-n Schnorr OR-proof made
// non-interactive with Fiat-Shamir. The ring is {signer} followed by the
// designated verifiers. Knowing any one ring secret suffices to produce an
// accepting signature, so a designated verifier can always present a forgery
// that nobody outside the ring can tell apart from the signer's output.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "laocoon/bytes.hpp"
#include "laocoon/group.hpp"
#include "laocoon/random.hpp"

namespace laocoon::mdvs {

class MdvsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DvKeyPair {
  G1Point y;  // g^x
  Scalar x;   // nonzero

  static DvKeyPair generate(const GroupContext& ctx, RandomSource& rng);
};

using Ring = std::vector<G1Point>;

Bytes encode_ring(const Ring& ring);
std::optional<Ring> decode_ring(ByteView b);

struct Signature {
  std::vector<Scalar> challenges;
  std::vector<Scalar> responses;
  // Not part of the wire encoding; verifiers supply it from public data.
  Ring ring;

  // u32 ring size, then every challenge, then every response.
  Bytes encode() const;
  static std::optional<Signature> decode(ByteView b, const Ring& ring);
  std::size_t encoded_size() const { return 4 + 2 * Scalar::kEncodedSize * ring.size(); }
};

// Signs with the secret of ring[0]. Throws MdvsError if the ring is smaller
// than two or g^x_signer != ring[0].
Signature sign(const GroupContext& ctx, const Scalar& x_signer, const Ring& ring, ByteView msg,
               RandomSource& rng);

// Public verification; no verifier secret is needed.
bool verify(const GroupContext& ctx, const Signature& sig, ByteView msg);

// Produces an accepting signature from the secret of ring[verifier_index]
// (index >= 1). Throws MdvsError if the key does not sit at that position.
Signature forge(const GroupContext& ctx, const Scalar& x_verifier, std::size_t verifier_index,
                const Ring& ring, ByteView msg, RandomSource& rng);

// Plain Schnorr signature (the one-member ring case), used for the
// administrator's self-signed certificate.
Signature certify(const GroupContext& ctx, const DvKeyPair& key, ByteView msg, RandomSource& rng);
bool verify_certificate(const GroupContext& ctx, const Signature& sig, ByteView msg);

}  // namespace laocoon::mdvs
