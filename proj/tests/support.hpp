#pragma once

#include <cstdint>
#include <string>

#include "laocoon/bytes.hpp"
#include "laocoon/group.hpp"
#include "laocoon/random.hpp"

namespace laocoon::test {

inline const GroupContext& ctx() {
  static const GroupContext c = GroupContext::setup("laocoon-v1");
  return c;
}

inline GtElement random_gt(RandomSource& rng) { return ctx().z().pow(Scalar::random(rng)); }

inline Bytes random_bytes(RandomSource& rng, std::size_t n) {
  Bytes b(n);
  rng.fill(b);
  return b;
}

}  // namespace laocoon::test
