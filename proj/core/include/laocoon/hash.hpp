#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "laocoon/bytes.hpp"

namespace laocoon {

// SHA-256 is the only hash used by the library.
using Digest = std::array<std::uint8_t, 32>;

inline constexpr std::string_view kHashSpec = "sha-256";

Digest sha256(ByteView data);

inline Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

std::string to_hex(const Digest& d);
Digest digest_from_hex(std::string_view hex);
Digest digest_from_bytes(ByteView b);

// Streaming SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteView data);
  Sha256& update(std::string_view data) { return update(as_bytes(data)); }
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace laocoon
