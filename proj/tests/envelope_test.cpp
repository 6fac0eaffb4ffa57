#include <gtest/gtest.h>

#include "laocoon/envelope.hpp"
#include "support.hpp"

using namespace laocoon;
using namespace laocoon::envelope;
using laocoon::test::ctx;

TEST(Envelope, RoundTrip) {
  DeterministicRandom rng(50);
  auto kp = pre::keygen(ctx(), rng);
  auto p = to_bytes("secret key and credential");
  auto c = hybrid_enc(ctx(), kp.pub, p, rng);
  EXPECT_EQ(c.level(), Level::kSecond);
  auto out = hybrid_dec(ctx(), kp, c);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, p);
  EXPECT_THROW(hybrid_enc(ctx(), kp.pub, Bytes{}, rng), std::invalid_argument);
}

TEST(Envelope, FlippedDemByte) {
  DeterministicRandom rng(51);
  auto kp = pre::keygen(ctx(), rng);
  auto c = hybrid_enc(ctx(), kp.pub, to_bytes("payload"), rng);
  for (std::size_t i = 0; i < c.dem.size(); ++i) {
    auto t = c;
    t.dem[i] ^= 0x01;
    auto out = hybrid_dec(ctx(), kp, t);
    ASSERT_FALSE(out) << i;
    EXPECT_EQ(out.error(), OpenError::kDemAuthFailed);
  }
}

TEST(Envelope, FreshCiphertexts) {
  DeterministicRandom rng(52);
  auto kp = pre::keygen(ctx(), rng);
  auto p = to_bytes("same");
  EXPECT_NE(hybrid_enc(ctx(), kp.pub, p, rng).encode(), hybrid_enc(ctx(), kp.pub, p, rng).encode());
}

TEST(Envelope, ReencRoundTripRandomPayloads) {
  DeterministicRandom rng(53);
  auto a = pre::keygen(ctx(), rng);
  auto v = pre::keygen(ctx(), rng);
  auto rk = pre::rekeygen(ctx(), a, v.pub, rng);
  for (int n = 0; n < 500; ++n) {
    auto p = test::random_bytes(rng, 1 + rng.uniform_index(4096));
    auto c = hybrid_enc(ctx(), a.pub, p, rng);
    auto r = hybrid_reenc(ctx(), rk, c, rng);
    ASSERT_TRUE(r.has_value());
    ASSERT_EQ(r->level(), Level::kFirst);
    ASSERT_EQ(r->dem, c.dem);
    auto wire = HybridCiphertext::decode(r->encode());
    ASSERT_TRUE(wire.has_value());
    auto out = hybrid_dec(ctx(), v, *wire);
    ASSERT_TRUE(out) << n;
    ASSERT_EQ(*out, p) << n;
  }
}

TEST(Envelope, FirstLevelNotReencrypted) {
  DeterministicRandom rng(54);
  auto a = pre::keygen(ctx(), rng);
  auto v = pre::keygen(ctx(), rng);
  auto w = pre::keygen(ctx(), rng);
  auto c = *hybrid_reenc(ctx(), pre::rekeygen(ctx(), a, v.pub, rng), hybrid_enc(ctx(), a.pub, to_bytes("x"), rng), rng);
  EXPECT_FALSE(hybrid_reenc(ctx(), pre::rekeygen(ctx(), v, w.pub, rng), c, rng).has_value());
}

TEST(Envelope, TamperedBetaRejected) {
  DeterministicRandom rng(55);
  auto a = pre::keygen(ctx(), rng);
  auto v = pre::keygen(ctx(), rng);
  auto c = hybrid_enc(ctx(), a.pub, to_bytes("x"), rng);
  std::get<pre::CiphertextL2>(c.kem).beta = ctx().h();
  EXPECT_FALSE(hybrid_reenc(ctx(), pre::rekeygen(ctx(), a, v.pub, rng), c, rng).has_value());
  auto out = hybrid_dec(ctx(), a, c);
  ASSERT_FALSE(out);
  EXPECT_EQ(out.error(), OpenError::kKemInvalid);
}

TEST(Envelope, WrongRecipient) {
  DeterministicRandom rng(56);
  auto a = pre::keygen(ctx(), rng);
  for (int n = 0; n < 100; ++n) {
    auto other = pre::keygen(ctx(), rng);
    auto c = hybrid_enc(ctx(), a.pub, to_bytes("credential"), rng);
    auto out = hybrid_dec(ctx(), other, c);
    ASSERT_FALSE(out);
    ASSERT_EQ(out.error(), OpenError::kDemAuthFailed);
  }
}

TEST(Envelope, EmptyDem) {
  DeterministicRandom rng(57);
  auto a = pre::keygen(ctx(), rng);
  auto c = hybrid_enc(ctx(), a.pub, to_bytes("x"), rng);
  c.dem.clear();
  auto out = hybrid_dec(ctx(), a, c);
  ASSERT_FALSE(out);
  EXPECT_EQ(out.error(), OpenError::kDemAuthFailed);
}

TEST(Envelope, DecodeRejectsMalformed) {
  DeterministicRandom rng(58);
  auto a = pre::keygen(ctx(), rng);
  auto wire = hybrid_enc(ctx(), a.pub, to_bytes("x"), rng).encode();
  EXPECT_FALSE(HybridCiphertext::decode(Bytes(wire.begin(), wire.end() - 1)).has_value());
  auto t = wire;
  t[0] = 1;  // level tag disagrees with the kem variant
  EXPECT_FALSE(HybridCiphertext::decode(t).has_value());
  t = wire;
  t.push_back(0);
  EXPECT_FALSE(HybridCiphertext::decode(t).has_value());
}

TEST(Envelope, CommitBasics) {
  DeterministicRandom rng(59);
  auto k = random_commit_key(rng);
  auto p = to_bytes("sigma");
  auto c = commit(k, p);
  EXPECT_TRUE(verify_commit(c, k, p));
  EXPECT_EQ(commit(k, p), c);
  auto k2 = random_commit_key(rng);
  EXPECT_FALSE(verify_commit(c, k2, p));
  Bytes kp(k.begin(), k.end());
  kp.insert(kp.end(), p.begin(), p.end());
  EXPECT_EQ(c.digest, sha256(kp));
}

TEST(Envelope, CommitBindingSmoke) {
  DeterministicRandom rng(60);
  auto k = random_commit_key(rng);
  auto p = test::random_bytes(rng, 64);
  auto c = commit(k, p);
  for (int n = 0; n < 10000; ++n) {
    auto k2 = random_commit_key(rng);
    auto p2 = n % 2 ? p : test::random_bytes(rng, 64);
    ASSERT_FALSE(verify_commit(c, k2, p2)) << n;
  }
  auto p2 = p;
  p2[0] ^= 1;
  EXPECT_FALSE(verify_commit(c, k, p2));
}

TEST(Envelope, CommitHiding) {
  DeterministicRandom rng(61);
  auto k = random_commit_key(rng);
  auto a = commit(k, to_bytes("YES")), b = commit(k, to_bytes("NO"));
  EXPECT_NE(a, b);
  EXPECT_NE(a.digest, sha256(std::string_view("YES")));
}
