#include "laocoon/random.hpp"

#include <openssl/rand.h>

#include <stdexcept>

namespace laocoon {

std::uint64_t RandomSource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::size_t RandomSource::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return static_cast<std::size_t>(v % bound);
  }
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

std::unique_ptr<RandomSource> SystemRandom::fork(std::string_view) {
  return std::make_unique<SystemRandom>();
}

DeterministicRandom::DeterministicRandom(std::uint64_t seed) {
  ByteWriter w;
  w.str("laocoon-drbg-seed").u64(seed);
  key_ = sha256(w.bytes());
}

DeterministicRandom::DeterministicRandom(ByteView seed) {
  ByteWriter w;
  w.str("laocoon-drbg-seed").blob(seed);
  key_ = sha256(w.bytes());
}

void DeterministicRandom::refill() {
  ByteWriter w;
  w.raw(key_).u64(counter_++);
  block_ = sha256(w.bytes());
  used_ = 0;
}

void DeterministicRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

std::unique_ptr<RandomSource> DeterministicRandom::fork(std::string_view label) {
  std::uint8_t material[32];
  fill(material);
  ByteWriter w;
  w.raw(material).str(label);
  return std::make_unique<DeterministicRandom>(ByteView(w.bytes()));
}

}  // namespace laocoon
