#include <benchmark/benchmark.h>

#include <random>

#include "gostrata/gostrata.hpp"

using namespace gos;

namespace {

void BM_WittMul(benchmark::State& state) {
  const WittRing r(3, static_cast<int>(state.range(0)), 8);
  std::mt19937_64 rng(1);
  WElem a = r.random(rng);
  const WElem b = r.random_unit(rng);
  for (auto _ : state) {
    a = r.mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_WittMul)->Arg(1)->Arg(2)->Arg(4);

void BM_LatticeNormalize(benchmark::State& state) {
  const WittRing r(5, 2, 8);
  std::mt19937_64 rng(2);
  std::vector<Mat2> bases;
  for (int i = 0; i < 64; ++i) bases.push_back(mat_random_unimodular(r, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lattice_normalize(r, 1, bases[i++ % bases.size()]));
  }
}
BENCHMARK(BM_LatticeNormalize);

// Every T for every S at a fixed f.
void BM_StrataSweep(benchmark::State& state) {
  const int f = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, false, s);
      const Mask gaps = d.gaps(0);
      for (Mask t = gaps;; t = (t - 1) & gaps) {
        benchmark::DoNotOptimize(stratum_descriptor(d, {t}));
        if (t == 0) break;
      }
    }
  }
}
BENCHMARK(BM_StrataSweep)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Roundtrip(benchmark::State& state) {
  const int f = static_cast<int>(state.range(0));
  std::vector<TrialSample> samples;
  for (std::uint64_t i = 0; i < 16; ++i) samples.push_back(sample_trial(3, f, 8, 17, i));
  std::size_t i = 0;
  for (auto _ : state) {
    const TrialSample& s = samples[i++ % samples.size()];
    benchmark::DoNotOptimize(roundtrip_all_strata(s.point, s.sheet1));
  }
}
BENCHMARK(BM_Roundtrip)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
