#include "laocoon/hash.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace laocoon {

struct Sha256::Impl {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("EVP sha256 init failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(impl_->ctx); }

Sha256& Sha256::update(ByteView data) {
  if (!data.empty() && EVP_DigestUpdate(impl_->ctx, data.data(), data.size()) != 1) {
    throw std::runtime_error("EVP sha256 update failed");
  }
  return *this;
}

Digest Sha256::finish() {
  Digest out{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(impl_->ctx, out.data(), &len) != 1 || len != out.size()) {
    throw std::runtime_error("EVP sha256 final failed");
  }
  return out;
}

Digest sha256(ByteView data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("EVP sha256 failed");
  }
  return out;
}

std::string to_hex(const Digest& d) { return to_hex(ByteView(d)); }

Digest digest_from_bytes(ByteView b) {
  if (b.size() != 32) throw DecodeError("digest must be 32 bytes");
  Digest d{};
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

Digest digest_from_hex(std::string_view hex) { return digest_from_bytes(from_hex(hex)); }

}  // namespace laocoon
