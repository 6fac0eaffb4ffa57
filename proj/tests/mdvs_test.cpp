#include <gtest/gtest.h>

#include "laocoon/mdvs.hpp"
#include "support.hpp"

using namespace laocoon;
using namespace laocoon::mdvs;
using laocoon::test::ctx;

namespace {

struct RingFixture {
  std::vector<DvKeyPair> keys;
  Ring ring;

  RingFixture(RandomSource& rng, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      keys.push_back(DvKeyPair::generate(ctx(), rng));
      ring.push_back(keys.back().y);
    }
  }
};

Bytes msg(std::string_view s) { return to_bytes(s); }

}  // namespace

TEST(Mdvs, Completeness) {
  DeterministicRandom rng(30);
  for (int n = 0; n < 500; ++n) {
    RingFixture f(rng, 2 + rng.uniform_index(4));
    auto m = test::random_bytes(rng, 1 + rng.uniform_index(64));
    auto sig = sign(ctx(), f.keys[0].x, f.ring, m, rng);
    ASSERT_TRUE(verify(ctx(), sig, m)) << n;
  }
}

TEST(Mdvs, FreshNonces) {
  DeterministicRandom rng(31);
  RingFixture f(rng, 3);
  auto a = sign(ctx(), f.keys[0].x, f.ring, msg("pk"), rng);
  auto b = sign(ctx(), f.keys[0].x, f.ring, msg("pk"), rng);
  EXPECT_NE(a.encode(), b.encode());
  EXPECT_TRUE(verify(ctx(), a, msg("pk")));
  EXPECT_TRUE(verify(ctx(), b, msg("pk")));
}

TEST(Mdvs, MessageBound) {
  DeterministicRandom rng(32);
  RingFixture f(rng, 3);
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("m"), rng);
  EXPECT_FALSE(verify(ctx(), s, msg("m'")));
}

TEST(Mdvs, PerturbedChallengeRejects) {
  DeterministicRandom rng(33);
  RingFixture f(rng, 4);
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("m"), rng);
  for (std::size_t i = 0; i < f.ring.size(); ++i) {
    auto t = s;
    t.challenges[i] = t.challenges[i] + Scalar::from_u64(1);
    EXPECT_FALSE(verify(ctx(), t, msg("m"))) << i;
  }
}

TEST(Mdvs, RingReorderRejects) {
  DeterministicRandom rng(34);
  RingFixture f(rng, 4);
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("m"), rng);
  auto t = s;
  std::swap(t.ring[1], t.ring[2]);
  EXPECT_FALSE(verify(ctx(), t, msg("m")));
  // Permuting the proof components along with the ring still fails: the
  // ring order is hashed into the challenge.
  std::swap(t.challenges[1], t.challenges[2]);
  std::swap(t.responses[1], t.responses[2]);
  EXPECT_FALSE(verify(ctx(), t, msg("m")));
}

TEST(Mdvs, ForgeAtEveryPosition) {
  DeterministicRandom rng(35);
  RingFixture f(rng, 8);
  for (std::size_t pos = 1; pos < f.ring.size(); ++pos) {
    auto s = forge(ctx(), f.keys[pos].x, pos, f.ring, msg("pk"), rng);
    EXPECT_TRUE(verify(ctx(), s, msg("pk"))) << pos;
    auto genuine = sign(ctx(), f.keys[0].x, f.ring, msg("pk"), rng);
    EXPECT_EQ(s.encode().size(), genuine.encode().size());
    EXPECT_EQ(s.challenges.size(), genuine.challenges.size());
    EXPECT_EQ(s.responses.size(), genuine.responses.size());
  }
}

TEST(Mdvs, ForgeWithOutsiderFails) {
  DeterministicRandom rng(36);
  RingFixture f(rng, 3);
  auto outsider = DvKeyPair::generate(ctx(), rng);
  EXPECT_THROW(forge(ctx(), outsider.x, 1, f.ring, msg("pk"), rng), MdvsError);
  EXPECT_THROW(forge(ctx(), f.keys[1].x, 2, f.ring, msg("pk"), rng), MdvsError);
  EXPECT_THROW(forge(ctx(), f.keys[0].x, 0, f.ring, msg("pk"), rng), MdvsError);
  EXPECT_THROW(sign(ctx(), f.keys[1].x, f.ring, msg("pk"), rng), MdvsError);
  EXPECT_THROW(sign(ctx(), f.keys[0].x, Ring{f.ring[0]}, msg("pk"), rng), MdvsError);
}

TEST(Mdvs, SingleBitFlipRejects) {
  DeterministicRandom rng(37);
  RingFixture f(rng, 3);
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("pk"), rng);
  auto wire = s.encode();
  ASSERT_TRUE(verify(ctx(), *Signature::decode(wire, f.ring), msg("pk")));
  for (std::size_t bit = 0; bit < wire.size() * 8; ++bit) {
    auto t = wire;
    t[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    auto d = Signature::decode(t, f.ring);
    ASSERT_TRUE(!d || !verify(ctx(), *d, msg("pk"))) << "bit " << bit;
  }
}

TEST(Mdvs, StructuralIndistinguishability) {
  DeterministicRandom rng(38);
  RingFixture f(rng, 4);
  double genuine_sum = 0, forged_sum = 0;
  const int trials = 200;
  for (int n = 0; n < trials; ++n) {
    auto g = sign(ctx(), f.keys[0].x, f.ring, msg("pk"), rng);
    auto fk = forge(ctx(), f.keys[1 + n % 3].x, 1 + n % 3, f.ring, msg("pk"), rng);
    auto ge = g.encode(), fe = fk.encode();
    ASSERT_EQ(ge.size(), fe.size());
    ASSERT_TRUE(std::equal(ge.begin(), ge.begin() + 4, fe.begin()));
    for (const auto* v : {&g.challenges, &g.responses}) {
      for (const auto& x : *v) genuine_sum += x.encode()[0];
    }
    for (const auto* v : {&fk.challenges, &fk.responses}) {
      for (const auto& x : *v) forged_sum += x.encode()[0];
    }
  }
  // Top bytes of uniform scalars mod q are roughly uniform on [0, 0x73].
  const double per = trials * 8.0;
  EXPECT_NEAR(genuine_sum / per, 57.5, 4.0);
  EXPECT_NEAR(forged_sum / per, 57.5, 4.0);
}

TEST(Mdvs, CertificateAndRingCodec) {
  DeterministicRandom rng(39);
  auto k = DvKeyPair::generate(ctx(), rng);
  auto cert = certify(ctx(), k, msg("admin"), rng);
  EXPECT_TRUE(verify_certificate(ctx(), cert, msg("admin")));
  EXPECT_FALSE(verify_certificate(ctx(), cert, msg("admin2")));
  RingFixture f(rng, 5);
  EXPECT_EQ(decode_ring(encode_ring(f.ring)), f.ring);
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("m"), rng);
  EXPECT_EQ(s.encode().size(), s.encoded_size());
  EXPECT_FALSE(Signature::decode(s.encode(), Ring(f.ring.begin(), f.ring.begin() + 4)).has_value());
}

TEST(Mdvs, CountsAsSingleOps) {
  DeterministicRandom rng(40);
  RingFixture f(rng, 6);
  OpCounter c;
  auto s = sign(ctx(), f.keys[0].x, f.ring, msg("m"), rng);
  EXPECT_TRUE(verify(ctx(), s, msg("m")));
  EXPECT_EQ(c.counts(), (OpCounts{0, 0, 0, 1, 1}));
}
