#include <gtest/gtest.h>

#include <set>

#include "laocoon/group.hpp"
#include "support.hpp"

using namespace laocoon;
using laocoon::test::ctx;

namespace {

// Group order q, big-endian.
const Bytes kOrder = from_hex("73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");

bool less_than_order(const Bytes& be) {
  return std::lexicographical_compare(be.begin(), be.end(), kOrder.begin(), kOrder.end());
}

}  // namespace

TEST(Groups, ZIsPairingOfGenerators) {
  EXPECT_EQ(pairing(ctx().g(), ctx().h()), ctx().z());
  EXPECT_FALSE(ctx().z().is_one());
}

TEST(Groups, SetupIsDeterministic) {
  auto a = GroupContext::setup("laocoon-v1");
  auto b = GroupContext::setup("laocoon-v1");
  EXPECT_EQ(a.encode(), b.encode());
  EXPECT_NE(a.encode(), GroupContext::setup("other-tag").encode());
  EXPECT_THROW(GroupContext::setup(""), std::invalid_argument);
}

TEST(Groups, ContextRoundTrip) {
  auto back = GroupContext::decode(ctx().encode());
  EXPECT_EQ(back, ctx());
}

TEST(Groups, Bilinearity) {
  DeterministicRandom rng(1);
  for (int i = 0; i < 100; ++i) {
    auto a = Scalar::random(rng);
    auto b = Scalar::random(rng);
    EXPECT_EQ(pairing(ctx().g().pow(a), ctx().h().pow(b)), ctx().z().pow(a * b)) << i;
  }
}

TEST(Groups, HashToScalarDeterministic) {
  auto x = hash_to_scalar(as_bytes("abc"));
  EXPECT_EQ(x, hash_to_scalar(as_bytes("abc")));
  EXPECT_FALSE(x == hash_to_scalar(as_bytes("abd")));
}

TEST(Groups, HashToScalarNoCollisions) {
  DeterministicRandom rng(2);
  std::set<Bytes> seen;
  for (int i = 0; i < 1000; ++i) {
    auto in = test::random_bytes(rng, 32);
    seen.insert(hash_to_scalar(in).encode());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Groups, HashToScalarBelowOrder) {
  DeterministicRandom rng(3);
  for (int i = 0; i < 10000; ++i) {
    auto in = test::random_bytes(rng, 1 + rng.uniform_index(96));
    auto enc = hash_to_scalar(in).encode();
    ASSERT_EQ(enc.size(), 32u);
    ASSERT_TRUE(less_than_order(enc)) << i;
  }
}

TEST(Groups, ScalarDecodeRejectsNonCanonical) {
  EXPECT_FALSE(Scalar::decode(kOrder).has_value());
  EXPECT_FALSE(Scalar::decode(Bytes(31, 0)).has_value());
  auto below = kOrder;
  below.back() -= 1;
  EXPECT_TRUE(Scalar::decode(below).has_value());
  EXPECT_TRUE((Scalar::from_u64(1) + *Scalar::decode(below)).is_zero());
}

TEST(Groups, ScalarArithmetic) {
  DeterministicRandom rng(4);
  auto a = Scalar::random_nonzero(rng);
  auto b = Scalar::random(rng);
  EXPECT_EQ(a * a.inverse(), Scalar::from_u64(1));
  EXPECT_EQ((a + b) - b, a);
  EXPECT_TRUE((a + (-a)).is_zero());
  EXPECT_THROW(Scalar().inverse(), std::domain_error);
}

TEST(Groups, CanonicalFixedLengthEncodings) {
  DeterministicRandom rng(5);
  for (int i = 0; i < 10; ++i) {
    auto k = Scalar::random(rng);
    auto p1 = ctx().g().pow(k);
    auto p2 = ctx().h().pow(k);
    auto t = ctx().z().pow(k);
    auto e1 = p1.encode(), e2 = p2.encode(), et = t.encode();
    EXPECT_EQ(e1.size(), G1Point::kEncodedSize);
    EXPECT_EQ(e2.size(), G2Point::kEncodedSize);
    EXPECT_EQ(et.size(), GtElement::kEncodedSize);
    EXPECT_EQ(G1Point::decode(e1)->encode(), e1);
    EXPECT_EQ(G2Point::decode(e2)->encode(), e2);
    EXPECT_EQ(GtElement::decode(et)->encode(), et);
  }
  EXPECT_EQ(G1Point::identity().encode().size(), G1Point::kEncodedSize);
  EXPECT_TRUE(G1Point::decode(G1Point::identity().encode())->is_identity());
}

TEST(Groups, DecodeRejectsGarbage) {
  DeterministicRandom rng(6);
  auto junk = test::random_bytes(rng, GtElement::kEncodedSize);
  EXPECT_FALSE(GtElement::decode(junk).has_value());
  EXPECT_FALSE(G1Point::decode(Bytes(47, 0)).has_value());
  auto g = ctx().g().encode();
  g[20] ^= 0x01;
  EXPECT_FALSE(G1Point::decode(g).has_value());
}

TEST(Groups, TimestampEncoding) {
  for (std::uint64_t t : {0ull, 1ull, 2ull, 1'700'000'123ull, ~0ull}) {
    EXPECT_EQ(ctx().encode_timestamp(t), ctx().z().pow(Scalar::from_u64(t))) << t;
  }
  OpCounter c;
  (void)ctx().encode_timestamp(12345);
  EXPECT_EQ(c.counts(), OpCounts{});
}

TEST(Groups, OpCounterOnePerCall) {
  DeterministicRandom rng(7);
  auto k = Scalar::random(rng);
  {
    OpCounter c;
    (void)ctx().g().pow(k);
    EXPECT_EQ(c.counts(), (OpCounts{1, 0, 0, 0, 0}));
  }
  {
    OpCounter c;
    (void)ctx().h().pow(k);
    EXPECT_EQ(c.counts(), (OpCounts{1, 0, 0, 0, 0}));
  }
  {
    OpCounter c;
    (void)ctx().z().pow(k);
    EXPECT_EQ(c.counts(), (OpCounts{0, 1, 0, 0, 0}));
  }
  {
    OpCounter c;
    (void)pairing(ctx().g(), ctx().h());
    EXPECT_EQ(c.counts(), (OpCounts{0, 0, 1, 0, 0}));
  }
  {
    OpCounter c;
    (void)(ctx().g() * ctx().g());
    (void)(ctx().z() * ctx().z());
    EXPECT_EQ(c.counts(), OpCounts{});
  }
}

TEST(Groups, OpCounterNestingAndSuspension) {
  DeterministicRandom rng(8);
  auto k = Scalar::random(rng);
  OpCounter outer;
  {
    OpCounter inner;
    (void)ctx().g().pow(k);
    EXPECT_EQ(inner.counts().exp_g, 1u);
  }
  {
    UncountedScope quiet;
    (void)ctx().g().pow(k);
  }
  EXPECT_EQ(outer.counts().exp_g, 1u);
  std::uint64_t prev = 0;
  for (int i = 0; i < 5; ++i) {
    (void)ctx().z().pow(k);
    EXPECT_GT(outer.counts().exp_gt, prev);
    prev = outer.counts().exp_gt;
  }
}

TEST(Groups, DeterministicRandomForks) {
  DeterministicRandom a(9), b(9);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  auto fa = a.fork("x");
  auto fb = b.fork("y");
  EXPECT_NE(fa->next_u64(), fb->next_u64());
  std::vector<int> counts(5);
  for (int i = 0; i < 5000; ++i) counts[a.uniform_index(5)]++;
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
}
