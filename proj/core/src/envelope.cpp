#include "laocoon/envelope.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace laocoon::envelope {

namespace {

constexpr std::size_t kTagSize = 16;
constexpr std::size_t kNonceSize = 12;

struct DemKey {
  Digest key;
  std::array<std::uint8_t, kNonceSize> nonce;
};

DemKey derive(const GtElement& m) {
  auto encoded = m.encode();
  DemKey k{};
  Sha256 kh;
  k.key = kh.update("laocoon-dem-key-v1").update(encoded).finish();
  Sha256 nh;
  auto n = nh.update("laocoon-dem-nonce-v1").update(encoded).finish();
  std::copy_n(n.begin(), kNonceSize, k.nonce.begin());
  return k;
}

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx new_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

Bytes seal(const DemKey& k, ByteView plain) {
  auto ctx = new_ctx();
  Bytes out(plain.size() + kTagSize);
  int len = 0;
  int total = 0;
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, k.key.data(), k.nonce.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, plain.data(), static_cast<int>(plain.size())) != 1) {
    throw std::runtime_error("AES-GCM encrypt failed");
  }
  total = len;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize, out.data() + plain.size()) != 1) {
    throw std::runtime_error("AES-GCM finalize failed");
  }
  return out;
}

std::optional<Bytes> open(const DemKey& k, ByteView sealed) {
  if (sealed.size() < kTagSize) return std::nullopt;
  const std::size_t body = sealed.size() - kTagSize;
  auto ctx = new_ctx();
  Bytes out(body);
  int len = 0;
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, k.key.data(), k.nonce.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(body)) != 1) {
    return std::nullopt;
  }
  Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(body), sealed.end());
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) != 1) return std::nullopt;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) return std::nullopt;
  return out;
}

}  // namespace

std::string_view to_string(OpenError e) {
  switch (e) {
    case OpenError::kKemInvalid:
      return "kem-invalid";
    case OpenError::kDemAuthFailed:
      return "dem-auth-failed";
  }
  return "unknown";
}

Bytes HybridCiphertext::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(level()));
  std::visit([&](const auto& k) { w.raw(k.encode()); }, kem);
  w.blob(dem);
  return w.take();
}

std::optional<HybridCiphertext> HybridCiphertext::decode(ByteView b) {
  try {
    ByteReader r(b);
    HybridCiphertext c;
    auto level = r.u8();
    if (level == static_cast<std::uint8_t>(Level::kSecond)) {
      auto k = pre::CiphertextL2::decode(r.raw(pre::CiphertextL2::kEncodedSize));
      if (!k) return std::nullopt;
      c.kem = *k;
    } else if (level == static_cast<std::uint8_t>(Level::kFirst)) {
      auto k = pre::CiphertextL1::decode(r.raw(pre::CiphertextL1::kEncodedSize));
      if (!k) return std::nullopt;
      c.kem = *k;
    } else {
      return std::nullopt;
    }
    auto dem = r.blob();
    c.dem.assign(dem.begin(), dem.end());
    r.expect_done();
    return c;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

HybridCiphertext hybrid_enc(const GroupContext& ctx, const pre::PublicKey& pk, ByteView payload,
                            RandomSource& rng) {
  if (payload.empty()) throw std::invalid_argument("hybrid_enc: empty payload");
  auto m = ctx.z().pow(Scalar::random_nonzero(rng));
  HybridCiphertext c;
  c.kem = pre::enc2(ctx, pk, m, rng);
  c.dem = seal(derive(m), payload);
  return c;
}

std::optional<HybridCiphertext> hybrid_reenc(const GroupContext& ctx, const pre::ReKey& rk,
                                             const HybridCiphertext& c, RandomSource& rng) {
  const auto* second = std::get_if<pre::CiphertextL2>(&c.kem);
  if (second == nullptr) return std::nullopt;
  auto first = pre::reenc(ctx, rk, *second, rng);
  if (!first) return std::nullopt;
  return HybridCiphertext{*first, c.dem};
}

Expected<Bytes, OpenError> hybrid_dec(const GroupContext& ctx, const pre::KeyPair& sk,
                                      const HybridCiphertext& c) {
  GtElement m;
  if (const auto* second = std::get_if<pre::CiphertextL2>(&c.kem)) {
    auto opened = pre::dec2(ctx, sk, *second);
    if (!opened) return OpenError::kKemInvalid;
    m = *opened;
  } else {
    m = pre::dec1(ctx, sk, std::get<pre::CiphertextL1>(c.kem));
  }
  auto plain = open(derive(m), c.dem);
  if (!plain) return OpenError::kDemAuthFailed;
  return std::move(*plain);
}

CommitKey random_commit_key(RandomSource& rng) {
  CommitKey k{};
  rng.fill(k);
  return k;
}

Commitment commit(const CommitKey& k, ByteView payload) {
  Sha256 h;
  h.update(k).update(payload);
  return Commitment{h.finish()};
}

bool verify_commit(const Commitment& c, const CommitKey& k, ByteView payload) {
  return commit(k, payload) == c;
}

}  // namespace laocoon::envelope
