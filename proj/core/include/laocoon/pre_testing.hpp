#pragma once

// Explicit-randomness entry points for tests. Production code samples
// nonzero randomness through the RandomSource overloads in pre.hpp; these
// accept any value, including zero.

#include "laocoon/pre.hpp"

namespace laocoon::pre::testing {

ReKey rekeygen_with(const GroupContext& ctx, const KeyPair& from, const PublicKey& to,
                    const Scalar& r, const Scalar& w);

CiphertextL2 enc2_with(const GroupContext& ctx, const PublicKey& pk, const GtElement& m,
                       const Scalar& k);

std::optional<CiphertextL1> reenc_with(const GroupContext& ctx, const ReKey& rk,
                                       const CiphertextL2& c, const Scalar& w_prime);

KeyPair keypair_from_scalars(const GroupContext& ctx, const Scalar& sk1, const Scalar& sk2);

}  // namespace laocoon::pre::testing
