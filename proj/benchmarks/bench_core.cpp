#include <benchmark/benchmark.h>

#include <random>

#include "muskat/dtn_oracle.hpp"
#include "muskat/elliptic_solve.hpp"
#include "muskat/models.hpp"
#include "muskat/time_integration.hpp"

using namespace muskat;

namespace {

SpectralField sample(int n, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto h = random_decay_field(n, 3.0, rng);
  return (amplitude / wiener_norm(h, 1)) * h;
}

ModelParams wnl1() {
  ModelParams p;
  p.lambda = 1.0;
  p.sigma = 1.0;
  return p;
}

void BM_DealiasedProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = sample(n, 1.0, 1), g = sample(n, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pointwise_product(f, g));
}
BENCHMARK(BM_DealiasedProduct)->RangeMultiplier(2)->Range(32, 1024);

void BM_CommutatorI(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = sample(n, 1e-2, 3), V = sample(n, 1.0, 4);
  const auto p = wnl1();
  for (auto _ : state) benchmark::DoNotOptimize(commutator_I(h, V, p));
}
BENCHMARK(BM_CommutatorI)->RangeMultiplier(2)->Range(32, 512);

void BM_SolveQuasilinear(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = sample(n, 1e-2, 5);
  const auto p = wnl1();
  const auto F = model_forcing(h, p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_quasilinear(h, F, p));
}
BENCHMARK(BM_SolveQuasilinear)->RangeMultiplier(2)->Range(32, 512);

void BM_Rk4Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = wnl1();
  IntegratorState s;
  s.h = sample(n, 1e-3, 6);
  s.dt = suggest_dt(n, p, Scheme::RK4);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, p, s.dt, s.t + 10 * s.dt));
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(2)->Range(32, 256);

void BM_SolveStrip(benchmark::State& state) {
  const StripGrid grid{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 2};
  const auto h = cosine_mode(16, 1), psi = cosine_mode(16, 2);
  const auto p = ModelParams::lubrication(1, 0, 1, 1, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_strip(h, psi, grid, p));
}
BENCHMARK(BM_SolveStrip)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
