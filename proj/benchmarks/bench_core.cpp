#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpcollapse/functional.hpp"
#include "gpcollapse/minimizer.hpp"
#include "gpcollapse/profile.hpp"
#include "gpcollapse/random_fields.hpp"

using namespace gpcollapse;

namespace {

const RadialProfile& shared_profile() {
  static const RadialProfile q = solve_profile();
  return q;
}

ComplexField sample_field(int n) {
  const SpectralGrid g(n, 12.0);
  std::mt19937_64 rng(1);
  return random_smooth_field(g, rng);
}

FunctionalCoefficients blowup_coefficients() {
  GPParams p;
  p.a_star = shared_profile().mass();
  p.a = p.a_star - 0.05;
  p.omega = 0.5;
  p.scale = Scale::blowup;
  return p.coefficients();
}

}  // namespace

static void BM_Fft2dForward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Fft2d fft(n);
  const auto u = sample_field(n);
  std::vector<cplx> out(u.values().size());
  for (auto _ : state) {
    fft.forward(u.values(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n);
}
BENCHMARK(BM_Fft2dForward)->Arg(128)->Arg(256)->Arg(512);

static void BM_Energy(benchmark::State& state) {
  const auto u = sample_field(static_cast<int>(state.range(0)));
  const GPFunctional f(u.grid(), blowup_coefficients());
  for (auto _ : state) benchmark::DoNotOptimize(f.energy(u).total);
}
BENCHMARK(BM_Energy)->Arg(128)->Arg(256);

static void BM_EnergyAndGradient(benchmark::State& state) {
  const auto u = sample_field(static_cast<int>(state.range(0)));
  const GPFunctional f(u.grid(), blowup_coefficients());
  ComplexField hu(u.grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.energy_and_gradient(u, hu).total);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_EnergyAndGradient)->Arg(128)->Arg(256);

static void BM_SolveProfile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_profile(static_cast<double>(state.range(0))).mass());
}
BENCHMARK(BM_SolveProfile)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_MinimizeWarmStart(benchmark::State& state) {
  GPParams p;
  p.a_star = shared_profile().mass();
  p.a = p.a_star - 0.1;
  p.scale = Scale::blowup;
  SolveConfig cfg;
  cfg.n = 128;
  cfg.init = InitKind::profile;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(p, cfg, shared_profile()).iters);
}
BENCHMARK(BM_MinimizeWarmStart)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
