#include "laocoon/mdvs.hpp"

namespace laocoon::mdvs {

namespace {

Scalar fiat_shamir(const Ring& ring, ByteView msg, const std::vector<G1Point>& commitments) {
  ByteWriter w;
  w.str("laocoon-mdvs-v1").u32(static_cast<std::uint32_t>(ring.size()));
  for (const auto& y : ring) w.raw(y.encode());
  w.blob(msg);
  for (const auto& r : commitments) w.raw(r.encode());
  return hash_to_scalar(w.bytes());
}

bool ring_ok(const Ring& ring) {
  for (const auto& y : ring) {
    if (y.is_identity()) return false;
  }
  return !ring.empty();
}

// OR-proof for the secret at `position`; every other position is simulated.
Signature or_sign(const GroupContext& ctx, const Scalar& x, std::size_t position, const Ring& ring,
                  ByteView msg, RandomSource& rng) {
  const std::size_t n = ring.size();
  Signature sig;
  sig.ring = ring;
  sig.challenges.resize(n);
  sig.responses.resize(n);
  std::vector<G1Point> commitments(n);

  Scalar sum;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == position) continue;
    sig.challenges[i] = Scalar::random(rng);
    sig.responses[i] = Scalar::random(rng);
    commitments[i] = ctx.g().pow(sig.responses[i]) * ring[i].pow(sig.challenges[i]);
    sum = sum + sig.challenges[i];
  }
  auto nonce = Scalar::random_nonzero(rng);
  commitments[position] = ctx.g().pow(nonce);

  auto c = fiat_shamir(ring, msg, commitments);
  sig.challenges[position] = c - sum;
  sig.responses[position] = nonce - sig.challenges[position] * x;
  return sig;
}

bool or_verify(const GroupContext& ctx, const Signature& sig, ByteView msg) {
  const std::size_t n = sig.ring.size();
  if (!ring_ok(sig.ring) || sig.challenges.size() != n || sig.responses.size() != n) return false;
  std::vector<G1Point> commitments(n);
  Scalar sum;
  for (std::size_t i = 0; i < n; ++i) {
    commitments[i] = ctx.g().pow(sig.responses[i]) * sig.ring[i].pow(sig.challenges[i]);
    sum = sum + sig.challenges[i];
  }
  return fiat_shamir(sig.ring, msg, commitments) == sum;
}

void check_position(const GroupContext& ctx, const Scalar& x, std::size_t position, const Ring& ring) {
  if (position >= ring.size()) throw MdvsError("ring position out of range");
  if (!ring_ok(ring)) throw MdvsError("ring contains the identity");
  if (x.is_zero() || ctx.g().pow(x) != ring[position]) {
    throw MdvsError("secret key does not match the claimed ring position");
  }
}

}  // namespace

DvKeyPair DvKeyPair::generate(const GroupContext& ctx, RandomSource& rng) {
  auto x = Scalar::random_nonzero(rng);
  return DvKeyPair{ctx.g().pow(x), x};
}

Bytes encode_ring(const Ring& ring) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(ring.size()));
  for (const auto& y : ring) w.raw(y.encode());
  return w.take();
}

std::optional<Ring> decode_ring(ByteView b) {
  try {
    ByteReader r(b);
    auto n = r.u32();
    if (n > r.remaining() / G1Point::kEncodedSize) return std::nullopt;
    Ring ring;
    ring.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      auto y = G1Point::decode(r.raw(G1Point::kEncodedSize));
      if (!y) return std::nullopt;
      ring.push_back(*y);
    }
    r.expect_done();
    return ring;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

Bytes Signature::encode() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(challenges.size()));
  for (const auto& c : challenges) w.raw(c.encode());
  for (const auto& s : responses) w.raw(s.encode());
  return w.take();
}

std::optional<Signature> Signature::decode(ByteView b, const Ring& ring) {
  try {
    ByteReader r(b);
    if (r.u32() != ring.size()) return std::nullopt;
    Signature sig;
    sig.ring = ring;
    for (auto* v : {&sig.challenges, &sig.responses}) {
      v->reserve(ring.size());
      for (std::size_t i = 0; i < ring.size(); ++i) {
        auto s = Scalar::decode(r.raw(Scalar::kEncodedSize));
        if (!s) return std::nullopt;
        v->push_back(*s);
      }
    }
    r.expect_done();
    return sig;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

Signature sign(const GroupContext& ctx, const Scalar& x_signer, const Ring& ring, ByteView msg,
               RandomSource& rng) {
  count_operation(&OpCounts::sigs);
  UncountedScope quiet;
  if (ring.size() < 2) throw MdvsError("ring needs the signer and at least one verifier");
  check_position(ctx, x_signer, 0, ring);
  return or_sign(ctx, x_signer, 0, ring, msg, rng);
}

bool verify(const GroupContext& ctx, const Signature& sig, ByteView msg) {
  count_operation(&OpCounts::vfys);
  UncountedScope quiet;
  if (sig.ring.size() < 2) return false;
  return or_verify(ctx, sig, msg);
}

Signature forge(const GroupContext& ctx, const Scalar& x_verifier, std::size_t verifier_index,
                const Ring& ring, ByteView msg, RandomSource& rng) {
  count_operation(&OpCounts::sigs);
  UncountedScope quiet;
  if (ring.size() < 2) throw MdvsError("ring needs the signer and at least one verifier");
  if (verifier_index == 0) throw MdvsError("position 0 belongs to the signer");
  check_position(ctx, x_verifier, verifier_index, ring);
  return or_sign(ctx, x_verifier, verifier_index, ring, msg, rng);
}

Signature certify(const GroupContext& ctx, const DvKeyPair& key, ByteView msg, RandomSource& rng) {
  count_operation(&OpCounts::sigs);
  UncountedScope quiet;
  Ring ring{key.y};
  check_position(ctx, key.x, 0, ring);
  return or_sign(ctx, key.x, 0, ring, msg, rng);
}

bool verify_certificate(const GroupContext& ctx, const Signature& sig, ByteView msg) {
  count_operation(&OpCounts::vfys);
  UncountedScope quiet;
  if (sig.ring.size() != 1) return false;
  return or_verify(ctx, sig, msg);
}

}  // namespace laocoon::mdvs
