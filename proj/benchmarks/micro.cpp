#include <benchmark/benchmark.h>

#include "laocoon/envelope.hpp"
#include "laocoon/mdvs.hpp"
#include "laocoon/pre.hpp"

using namespace laocoon;

namespace {

const GroupContext& ctx() {
  static const GroupContext c = GroupContext::setup("laocoon-v1");
  return c;
}

void BM_Pairing(benchmark::State& s) {
  DeterministicRandom rng(1);
  auto p = ctx().g().pow(Scalar::random(rng));
  for (auto _ : s) benchmark::DoNotOptimize(pairing(p, ctx().h()));
}
BENCHMARK(BM_Pairing);

void BM_ExpG1(benchmark::State& s) {
  DeterministicRandom rng(2);
  auto k = Scalar::random(rng);
  for (auto _ : s) benchmark::DoNotOptimize(ctx().g().pow(k));
}
BENCHMARK(BM_ExpG1);

void BM_ExpG2(benchmark::State& s) {
  DeterministicRandom rng(3);
  auto k = Scalar::random(rng);
  for (auto _ : s) benchmark::DoNotOptimize(ctx().h().pow(k));
}
BENCHMARK(BM_ExpG2);

void BM_ExpGt(benchmark::State& s) {
  DeterministicRandom rng(4);
  auto k = Scalar::random(rng);
  for (auto _ : s) benchmark::DoNotOptimize(ctx().z().pow(k));
}
BENCHMARK(BM_ExpGt);

void BM_TimestampTable(benchmark::State& s) {
  std::uint64_t t = 1'700'000'000;
  for (auto _ : s) benchmark::DoNotOptimize(ctx().encode_timestamp(t++));
}
BENCHMARK(BM_TimestampTable);

void BM_Keygen(benchmark::State& s) {
  DeterministicRandom rng(5);
  for (auto _ : s) benchmark::DoNotOptimize(pre::keygen(ctx(), rng));
}
BENCHMARK(BM_Keygen);

// The voter's ballot.
void BM_Rekeygen(benchmark::State& s) {
  DeterministicRandom rng(6);
  auto i = pre::keygen(ctx(), rng);
  auto j = pre::keygen(ctx(), rng);
  for (auto _ : s) benchmark::DoNotOptimize(pre::rekeygen(ctx(), i, j.pub, rng));
}
BENCHMARK(BM_Rekeygen);

void BM_Enc2(benchmark::State& s) {
  DeterministicRandom rng(7);
  auto i = pre::keygen(ctx(), rng);
  auto m = ctx().z();
  for (auto _ : s) benchmark::DoNotOptimize(pre::enc2(ctx(), i.pub, m, rng));
}
BENCHMARK(BM_Enc2);

void BM_Reenc(benchmark::State& s) {
  DeterministicRandom rng(8);
  auto i = pre::keygen(ctx(), rng);
  auto j = pre::keygen(ctx(), rng);
  auto rk = pre::rekeygen(ctx(), i, j.pub, rng);
  auto c = pre::enc2(ctx(), i.pub, ctx().z(), rng);
  for (auto _ : s) benchmark::DoNotOptimize(pre::reenc(ctx(), rk, c, rng));
}
BENCHMARK(BM_Reenc);

void BM_Dec1(benchmark::State& s) {
  DeterministicRandom rng(9);
  auto i = pre::keygen(ctx(), rng);
  auto j = pre::keygen(ctx(), rng);
  auto c = *pre::reenc(ctx(), pre::rekeygen(ctx(), i, j.pub, rng), pre::enc2(ctx(), i.pub, ctx().z(), rng), rng);
  for (auto _ : s) benchmark::DoNotOptimize(pre::dec1(ctx(), j, c));
}
BENCHMARK(BM_Dec1);

void BM_HybridEnc(benchmark::State& s) {
  DeterministicRandom rng(10);
  auto i = pre::keygen(ctx(), rng);
  Bytes payload(static_cast<std::size_t>(s.range(0)), 0x5a);
  for (auto _ : s) benchmark::DoNotOptimize(envelope::hybrid_enc(ctx(), i.pub, payload, rng));
}
BENCHMARK(BM_HybridEnc)->Arg(256)->Arg(4096);

mdvs::Ring ring_of(std::size_t n, RandomSource& rng, Scalar& x0) {
  mdvs::Ring ring;
  for (std::size_t i = 0; i < n; ++i) {
    auto k = mdvs::DvKeyPair::generate(ctx(), rng);
    if (i == 0) x0 = k.x;
    ring.push_back(k.y);
  }
  return ring;
}

void BM_MdvsSign(benchmark::State& s) {
  DeterministicRandom rng(11);
  Scalar x0;
  auto ring = ring_of(static_cast<std::size_t>(s.range(0)), rng, x0);
  auto msg = to_bytes("PK_i");
  for (auto _ : s) benchmark::DoNotOptimize(mdvs::sign(ctx(), x0, ring, msg, rng));
  s.SetComplexityN(s.range(0));
}
BENCHMARK(BM_MdvsSign)->RangeMultiplier(4)->Range(4, 256)->Complexity(benchmark::oN);

void BM_MdvsVerify(benchmark::State& s) {
  DeterministicRandom rng(12);
  Scalar x0;
  auto ring = ring_of(static_cast<std::size_t>(s.range(0)), rng, x0);
  auto msg = to_bytes("PK_i");
  auto sig = mdvs::sign(ctx(), x0, ring, msg, rng);
  for (auto _ : s) benchmark::DoNotOptimize(mdvs::verify(ctx(), sig, msg));
  s.SetComplexityN(s.range(0));
}
BENCHMARK(BM_MdvsVerify)->RangeMultiplier(4)->Range(4, 256)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
