#include "laocoon/pre.hpp"

#include "laocoon/pre_testing.hpp"

namespace laocoon::pre {

namespace {

void expect_tag(ByteReader& r, WireTag tag) {
  if (r.u8() != static_cast<std::uint8_t>(tag)) throw DecodeError("unexpected type tag");
}

template <typename Element>
Element read_element(ByteReader& r) {
  auto e = Element::decode(r.raw(Element::kEncodedSize));
  if (!e) throw DecodeError("invalid group element");
  return *e;
}

template <typename T, typename Fn>
std::optional<T> decode_or_null(ByteView b, Fn&& fn) {
  try {
    ByteReader r(b);
    T out = fn(r);
    r.expect_done();
    return out;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

}  // namespace

Bytes PublicKey::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(WireTag::kPublicKey)).raw(pk1.encode()).raw(pk2.encode());
  return w.take();
}

std::optional<PublicKey> PublicKey::decode(ByteView b) {
  return decode_or_null<PublicKey>(b, [](ByteReader& r) {
    expect_tag(r, WireTag::kPublicKey);
    PublicKey pk;
    pk.pk1 = read_element<GtElement>(r);
    pk.pk2 = read_element<G1Point>(r);
    return pk;
  });
}

Bytes KeyPair::encode_secret() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(WireTag::kSecretKey)).raw(sk1.encode()).raw(sk2.encode());
  return w.take();
}

KeyPair KeyPair::from_secret(const PublicKey& pub, ByteView secret) {
  ByteReader r(secret);
  expect_tag(r, WireTag::kSecretKey);
  auto a1 = Scalar::decode(r.raw(Scalar::kEncodedSize));
  auto a2 = Scalar::decode(r.raw(Scalar::kEncodedSize));
  r.expect_done();
  if (!a1 || !a2 || a1->is_zero() || a2->is_zero()) throw DecodeError("invalid secret key");
  return KeyPair{pub, *a1, *a2};
}

bool KeyPair::consistent(const GroupContext& ctx) const {
  return pub.pk1 == ctx.z().pow(sk1) && pub.pk2 == ctx.g().pow(sk2);
}

Bytes ReKey::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(WireTag::kReKey))
      .raw(r1.encode())
      .raw(r2.encode())
      .raw(r3.encode())
      .raw(r4.encode());
  return w.take();
}

std::optional<ReKey> ReKey::decode(ByteView b) {
  return decode_or_null<ReKey>(b, [](ByteReader& r) {
    expect_tag(r, WireTag::kReKey);
    ReKey rk;
    rk.r1 = read_element<G1Point>(r);
    rk.r2 = read_element<G2Point>(r);
    rk.r3 = read_element<GtElement>(r);
    rk.r4 = read_element<GtElement>(r);
    return rk;
  });
}

Bytes CiphertextL2::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(WireTag::kCiphertextL2))
      .raw(alpha.encode())
      .raw(beta.encode())
      .raw(gamma.encode());
  return w.take();
}

std::optional<CiphertextL2> CiphertextL2::decode(ByteView b) {
  return decode_or_null<CiphertextL2>(b, [](ByteReader& r) {
    expect_tag(r, WireTag::kCiphertextL2);
    CiphertextL2 c;
    c.alpha = read_element<G1Point>(r);
    c.beta = read_element<G2Point>(r);
    c.gamma = read_element<GtElement>(r);
    return c;
  });
}

Bytes CiphertextL1::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(WireTag::kCiphertextL1)).raw(t1.encode()).raw(t2.encode());
  return w.take();
}

std::optional<CiphertextL1> CiphertextL1::decode(ByteView b) {
  return decode_or_null<CiphertextL1>(b, [](ByteReader& r) {
    expect_tag(r, WireTag::kCiphertextL1);
    CiphertextL1 c;
    c.t1 = read_element<GtElement>(r);
    c.t2 = read_element<GtElement>(r);
    return c;
  });
}

KeyPair keygen(const GroupContext& ctx, RandomSource& rng) {
  auto a1 = Scalar::random_nonzero(rng);
  auto a2 = Scalar::random_nonzero(rng);
  return testing::keypair_from_scalars(ctx, a1, a2);
}

ReKey rekeygen(const GroupContext& ctx, const KeyPair& from, const PublicKey& to, RandomSource& rng) {
  auto r = Scalar::random_nonzero(rng);
  auto w = Scalar::random_nonzero(rng);
  return testing::rekeygen_with(ctx, from, to, r, w);
}

CiphertextL2 enc2(const GroupContext& ctx, const PublicKey& pk, const GtElement& m, RandomSource& rng) {
  return testing::enc2_with(ctx, pk, m, Scalar::random_nonzero(rng));
}

bool well_formed(const GroupContext& ctx, const CiphertextL2& c) {
  return pairing(c.alpha, ctx.h()) == pairing(ctx.g(), c.beta);
}

std::optional<CiphertextL1> reenc(const GroupContext& ctx, const ReKey& rk, const CiphertextL2& c,
                                  RandomSource& rng) {
  return testing::reenc_with(ctx, rk, c, Scalar::random_nonzero(rng));
}

std::optional<GtElement> dec2(const GroupContext& ctx, const KeyPair& sk, const CiphertextL2& c) {
  auto lhs = pairing(c.alpha, ctx.h());
  if (lhs != pairing(ctx.g(), c.beta)) return std::nullopt;
  return c.gamma / lhs.pow(sk.sk1);
}

GtElement dec1(const GroupContext&, const KeyPair& sk, const CiphertextL1& c) { return dec1(sk.sk2, c); }

GtElement dec1(const Scalar& sk2, const CiphertextL1& c) { return c.t2 / c.t1.pow(sk2.inverse()); }

namespace testing {

KeyPair keypair_from_scalars(const GroupContext& ctx, const Scalar& sk1, const Scalar& sk2) {
  return KeyPair{PublicKey{ctx.z().pow(sk1), ctx.g().pow(sk2)}, sk1, sk2};
}

ReKey rekeygen_with(const GroupContext& ctx, const KeyPair& from, const PublicKey& to,
                    const Scalar& r, const Scalar& w) {
  ReKey rk;
  rk.r1 = to.pk2.pow(from.sk1 + r);
  rk.r2 = ctx.h().pow(r);
  rk.r3 = pairing(to.pk2, ctx.h()).pow(w);
  rk.r4 = ctx.z().pow(w);
  return rk;
}

CiphertextL2 enc2_with(const GroupContext& ctx, const PublicKey& pk, const GtElement& m,
                       const Scalar& k) {
  return CiphertextL2{ctx.g().pow(k), ctx.h().pow(k), m * pk.pk1.pow(k)};
}

std::optional<CiphertextL1> reenc_with(const GroupContext& ctx, const ReKey& rk,
                                       const CiphertextL2& c, const Scalar& w_prime) {
  if (!well_formed(ctx, c)) return std::nullopt;
  auto t1 = pairing(rk.r1, c.beta);
  auto t2 = c.gamma * pairing(c.alpha, rk.r2);
  return CiphertextL1{t1 * rk.r3.pow(w_prime), t2 * rk.r4.pow(w_prime)};
}

}  // namespace testing

}  // namespace laocoon::pre
