#include <benchmark/benchmark.h>

#include "markoff/census.hpp"
#include "markoff/certify.hpp"
#include "markoff/chebyshev.hpp"
#include "markoff/flow.hpp"

using namespace markoff;

namespace {

void BM_EnumeratePoints(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const PadicInt D(p, k, 0);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_points(p, k, D).size());
}
BENCHMARK(BM_EnumeratePoints)->Args({7, 1})->Args({7, 2})->Args({11, 2})->Args({7, 3})->Unit(benchmark::kMillisecond);

void BM_GammaOrbits(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const PointSet pts = enumerate_points(p, k, PadicInt(p, k, 0));
  const auto gens = generator_letters(GroupScope::gamma);
  for (auto _ : state) benchmark::DoNotOptimize(orbits(pts, gens).orbits.size());
}
BENCHMARK(BM_GammaOrbits)->Args({7, 2})->Args({11, 2})->Args({7, 3})->Unit(benchmark::kMillisecond);

void BM_CompanionPower(benchmark::State& state) {
  const PadicInt x(13, 6, 5);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(companion_power(x, n));
}
BENCHMARK(BM_CompanionPower)->Arg(42)->Arg(1 << 10)->Arg(1 << 20);

void BM_MahlerFlow(benchmark::State& state) {
  const std::uint64_t p = 7;
  const int k_out = static_cast<int>(state.range(0));
  const int prec = flow_input_precision(p, k_out) + 1;
  auto bend = [p](const Vec2& w) {
    PadicInt pp(p, w[0].precision(), static_cast<std::int64_t>(p));
    return Vec2{w[0] + pp * (w[1] * w[1] + 1), w[1] + pp * w[0] * w[1] * 3};
  };
  const auto probes = residue_probes(p, 2);
  const PointMap f = PointMap::identity_mod_p(p, bend, probes);
  const Vec2 w{PadicInt(p, prec, 12345), PadicInt(p, prec, 678)};
  const PadicInt t(p, k_out, 987654);
  for (auto _ : state) benchmark::DoNotOptimize(mahler_flow(f, t, w, k_out));
}
BENCHMARK(BM_MahlerFlow)->Arg(2)->Arg(4)->Arg(6);

void BM_Certify(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const PadicInt D(p, 3, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(certify_minimal_polydisk(p, 3, D).pass);
}
BENCHMARK(BM_Certify)->Args({5, 3})->Args({7, 0})->Args({13, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
