#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>

#include "laocoon/bytes.hpp"
#include "laocoon/hash.hpp"

namespace laocoon {

// Source of randomness injected into every probabilistic operation.
// Instances are not thread-safe; give each thread its own fork.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;
  // Independent stream derived from this one and a label.
  virtual std::unique_ptr<RandomSource> fork(std::string_view label) = 0;

  std::uint64_t next_u64();
  // Uniform in [0, n) by rejection sampling. n must be positive.
  std::size_t uniform_index(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }
};

// Operating-system entropy (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<RandomSource> fork(std::string_view label) override;
};

// Hash-counter DRBG: block i = SHA-256(key || i). Reproducible for a seed.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::uint64_t seed);
  explicit DeterministicRandom(ByteView seed);

  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<RandomSource> fork(std::string_view label) override;

 private:
  void refill();

  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = sizeof(Digest);
};

}  // namespace laocoon
