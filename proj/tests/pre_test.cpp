#include <gtest/gtest.h>

#include <set>

#include "laocoon/pre.hpp"
#include "laocoon/pre_testing.hpp"
#include "support.hpp"

using namespace laocoon;
using namespace laocoon::pre;
using laocoon::test::ctx;
using laocoon::test::random_gt;

TEST(Pre, KeygenConsistent) {
  DeterministicRandom rng(10);
  auto kp = keygen(ctx(), rng);
  EXPECT_EQ(kp.pub.pk1, ctx().z().pow(kp.sk1));
  EXPECT_EQ(kp.pub.pk2, ctx().g().pow(kp.sk2));
  EXPECT_TRUE(kp.consistent(ctx()));
  EXPECT_EQ(pairing(kp.pub.pk2, ctx().h()).pow(kp.sk1), kp.pub.pk1.pow(kp.sk2));
}

TEST(Pre, KeygenDistinct) {
  DeterministicRandom rng(11);
  std::set<Bytes> pk2s;
  for (int i = 0; i < 1000; ++i) pk2s.insert(keygen(ctx(), rng).pub.pk2.encode());
  EXPECT_EQ(pk2s.size(), 1000u);
}

TEST(Pre, RekeygenZeroRandomness) {
  DeterministicRandom rng(12);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto rk = pre::testing::rekeygen_with(ctx(), i, j.pub, Scalar(), Scalar());
  EXPECT_EQ(rk.r1, j.pub.pk2.pow(i.sk1));
  EXPECT_TRUE(rk.r2.is_identity());
  EXPECT_TRUE(rk.r3.is_one());
  EXPECT_TRUE(rk.r4.is_one());
}

TEST(Pre, RekeygenFresh) {
  DeterministicRandom rng(13);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  EXPECT_NE(rekeygen(ctx(), i, j.pub, rng), rekeygen(ctx(), i, j.pub, rng));
}

TEST(Pre, RekeygenAlgebra) {
  DeterministicRandom rng(14);
  for (int n = 0; n < 10; ++n) {
    auto i = keygen(ctx(), rng);
    auto j = keygen(ctx(), rng);
    auto rk = rekeygen(ctx(), i, j.pub, rng);
    auto lhs = pairing(rk.r1, ctx().h());
    auto rhs = pairing(j.pub.pk2, rk.r2) * pairing(j.pub.pk2, ctx().h()).pow(i.sk1);
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(rk.r3.pow(j.sk2.inverse()), rk.r4);
  }
}

TEST(Pre, Enc2ZeroRandomness) {
  DeterministicRandom rng(15);
  auto kp = keygen(ctx(), rng);
  auto m = random_gt(rng);
  auto c = pre::testing::enc2_with(ctx(), kp.pub, m, Scalar());
  EXPECT_TRUE(c.alpha.is_identity());
  EXPECT_TRUE(c.beta.is_identity());
  EXPECT_EQ(c.gamma, m);
  EXPECT_EQ(dec2(ctx(), kp, c), m);
}

TEST(Pre, SecondLevelRoundTrip) {
  DeterministicRandom rng(16);
  for (int n = 0; n < 1000; ++n) {
    auto kp = keygen(ctx(), rng);
    auto m = random_gt(rng);
    auto c = enc2(ctx(), kp.pub, m, rng);
    ASSERT_TRUE(well_formed(ctx(), c));
    ASSERT_EQ(dec2(ctx(), kp, c), m) << n;
  }
}

TEST(Pre, FirstLevelRoundTrip) {
  DeterministicRandom rng(17);
  for (int n = 0; n < 1000; ++n) {
    auto i = keygen(ctx(), rng);
    auto j = keygen(ctx(), rng);
    auto m = random_gt(rng);
    auto c1 = reenc(ctx(), rekeygen(ctx(), i, j.pub, rng), enc2(ctx(), i.pub, m, rng), rng);
    ASSERT_TRUE(c1.has_value());
    ASSERT_EQ(dec1(ctx(), j, *c1), m) << n;
    ASSERT_EQ(dec1(j.sk2, *c1), m) << n;
  }
}

TEST(Pre, ReencRejectsBetaMismatch) {
  DeterministicRandom rng(18);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto k = Scalar::random_nonzero(rng);
  auto c = pre::testing::enc2_with(ctx(), i.pub, random_gt(rng), k);
  c.beta = ctx().h().pow(k + Scalar::from_u64(1));
  EXPECT_FALSE(well_formed(ctx(), c));
  EXPECT_FALSE(reenc(ctx(), rekeygen(ctx(), i, j.pub, rng), c, rng).has_value());
  EXPECT_FALSE(dec2(ctx(), i, c).has_value());
}

TEST(Pre, ReencRerandomizes) {
  DeterministicRandom rng(19);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto m = random_gt(rng);
  auto rk = rekeygen(ctx(), i, j.pub, rng);
  auto c = enc2(ctx(), i.pub, m, rng);
  auto a = reenc(ctx(), rk, c, rng);
  auto b = reenc(ctx(), rk, c, rng);
  EXPECT_NE(a->t1, b->t1);
  EXPECT_NE(a->t2, b->t2);
  EXPECT_EQ(dec1(ctx(), j, *a), m);
  EXPECT_EQ(dec1(ctx(), j, *b), m);
}

TEST(Pre, WrongKeyDecryption) {
  DeterministicRandom rng(20);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto other = keygen(ctx(), rng);
  auto rk = rekeygen(ctx(), i, j.pub, rng);
  for (int n = 0; n < 1000; ++n) {
    auto m = random_gt(rng);
    auto c = enc2(ctx(), i.pub, m, rng);
    ASSERT_NE(*dec2(ctx(), other, c), m) << n;
    auto c1 = reenc(ctx(), rk, c, rng);
    ASSERT_NE(dec1(ctx(), other, *c1), m) << n;
  }
}

TEST(Pre, Dec1OfIdentityT1) {
  DeterministicRandom rng(21);
  auto j = keygen(ctx(), rng);
  auto m = random_gt(rng);
  EXPECT_EQ(dec1(ctx(), j, CiphertextL1{GtElement::one(), m}), m);
}

TEST(Pre, RekeyStructuralKeyPrivacy) {
  DeterministicRandom rng(22);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  std::set<Bytes> published = {i.pub.pk1.encode(), i.pub.pk2.encode(), j.pub.pk1.encode(), j.pub.pk2.encode(),
                               ctx().z().pow(i.sk1).encode(), ctx().z().pow(j.sk1).encode()};
  std::set<Bytes> seen;
  for (int n = 0; n < 20; ++n) {
    auto rk = rekeygen(ctx(), i, j.pub, rng);
    for (auto field : {rk.r1.encode(), rk.r2.encode(), rk.r3.encode(), rk.r4.encode()}) {
      EXPECT_FALSE(published.contains(field));
      EXPECT_TRUE(seen.insert(field).second);
    }
  }
}

TEST(Pre, WireRoundTrip) {
  DeterministicRandom rng(23);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto rk = rekeygen(ctx(), i, j.pub, rng);
  auto c2 = enc2(ctx(), i.pub, random_gt(rng), rng);
  auto c1 = *reenc(ctx(), rk, c2, rng);
  EXPECT_EQ(ReKey::decode(rk.encode()), rk);
  EXPECT_EQ(CiphertextL2::decode(c2.encode()), c2);
  EXPECT_EQ(CiphertextL1::decode(c1.encode()), c1);
  EXPECT_EQ(PublicKey::decode(i.pub.encode()), i.pub);
  EXPECT_EQ(rk.encode().size(), ReKey::kEncodedSize);
  EXPECT_EQ(c2.encode().size(), CiphertextL2::kEncodedSize);
  EXPECT_EQ(c1.encode().size(), CiphertextL1::kEncodedSize);
  // Single use: a first-level encoding is not accepted as second level.
  EXPECT_FALSE(CiphertextL2::decode(c1.encode()).has_value());
  auto bad = c2.encode();
  bad[0] = static_cast<std::uint8_t>(WireTag::kReKey);
  EXPECT_FALSE(CiphertextL2::decode(bad).has_value());
  auto sec = KeyPair::from_secret(i.pub, i.encode_secret());
  EXPECT_EQ(sec.sk1, i.sk1);
  EXPECT_EQ(sec.sk2, i.sk2);
  EXPECT_THROW(KeyPair::from_secret(i.pub, Bytes(65, 0)), DecodeError);
}

TEST(Pre, OperationCounts) {
  DeterministicRandom rng(24);
  auto i = keygen(ctx(), rng);
  auto j = keygen(ctx(), rng);
  auto m = random_gt(rng);
  auto measure = [](auto&& fn) {
    OpCounter c;
    fn();
    return c.counts();
  };
  EXPECT_EQ(measure([&] { (void)keygen(ctx(), rng); }), (OpCounts{1, 1, 0, 0, 0}));
  ReKey rk;
  EXPECT_EQ(measure([&] { rk = rekeygen(ctx(), i, j.pub, rng); }), (OpCounts{2, 2, 1, 0, 0}));
  CiphertextL2 c;
  EXPECT_EQ(measure([&] { c = enc2(ctx(), i.pub, m, rng); }), (OpCounts{2, 1, 0, 0, 0}));
  EXPECT_EQ(measure([&] { (void)well_formed(ctx(), c); }), (OpCounts{0, 0, 2, 0, 0}));
  std::optional<CiphertextL1> c1;
  EXPECT_EQ(measure([&] { c1 = reenc(ctx(), rk, c, rng); }), (OpCounts{0, 2, 4, 0, 0}));
  EXPECT_EQ(measure([&] { (void)dec2(ctx(), i, c); }), (OpCounts{0, 1, 2, 0, 0}));
  EXPECT_EQ(measure([&] { (void)dec1(ctx(), j, *c1); }), (OpCounts{0, 1, 0, 0, 0}));
  auto bad = c;
  bad.beta = ctx().h();
  EXPECT_EQ(measure([&] { (void)reenc(ctx(), rk, bad, rng); }), (OpCounts{0, 0, 2, 0, 0}));
}
