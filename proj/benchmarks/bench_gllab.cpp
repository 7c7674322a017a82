#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "gllab/adelta.hpp"
#include "gllab/charges.hpp"
#include "gllab/contour.hpp"
#include "gllab/harness.hpp"
#include "gllab/polynomial.hpp"
#include "gllab/supercharge.hpp"

namespace {

using gllab::Complex;

std::vector<Complex> disk_samples(int n, std::uint64_t seed, double radius = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i)
    out.push_back(std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)));
  return out;
}

void BM_FindRoots(benchmark::State& state) {
  const auto p = gllab::Polynomial::from_coeffs(
      gllab::Polynomial::from_roots(disk_samples(static_cast<int>(state.range(0)), 1)).coeffs());
  for (auto _ : state) benchmark::DoNotOptimize(gllab::find_roots(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FindRoots)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_CriticalPoints(benchmark::State& state) {
  const auto p = gllab::Polynomial::from_roots(disk_samples(static_cast<int>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(gllab::critical_points(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CriticalPoints)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_CountRootsCircle(benchmark::State& state) {
  const auto p = gllab::Polynomial::from_roots(disk_samples(static_cast<int>(state.range(0)), 3));
  const auto c = gllab::Contour::circle(0.0, 1.5, 64.0);
  for (auto _ : state) benchmark::DoNotOptimize(gllab::count_roots_in(p, c));
}
BENCHMARK(BM_CountRootsCircle)->Arg(10)->Arg(100);

void BM_BuildMask(benchmark::State& state) {
  const auto k = gllab::ConvexDomain::disk(0.0, 1.0);
  const gllab::RootSplit split(k, disk_samples(10, 4), {Complex{1.8, 0.3}, Complex{-0.4, -2.1}});
  const auto crit = gllab::critical_points(split.p());
  const gllab::Box box{-2.5, 2.5, -2.5, 2.5};
  const double resolution = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gllab::build_mask(split, 1e-3, box, resolution, crit));
  state.counters["cells"] = 25.0 * resolution * resolution;
}
BENCHMARK(BM_BuildMask)->Arg(50)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_TorusSearch(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (auto& v : x) v = unit(rng);
  const gllab::TorusConfig cfg(x);
  for (auto _ : state) benchmark::DoNotOptimize(gllab::torus_low_potential_point(cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TorusSearch)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_CurveMin(benchmark::State& state) {
  const auto ex = gllab::sharp_example(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(gllab::curve_min(ex.charges, ex.curve, gllab::PotentialMode::modulus));
}
BENCHMARK(BM_CurveMin)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SuperchargeObjective(benchmark::State& state) {
  gllab::SearchConfig cfg;
  cfg.m = static_cast<int>(state.range(0));
  cfg.exclusion_margin = 0.05;
  std::vector<Complex> z;
  for (int l = 0; l < cfg.m; ++l) z.emplace_back((l + 0.5) / cfg.m, 0.1);
  const gllab::ChargeSet cs(z);
  for (auto _ : state) benchmark::DoNotOptimize(gllab::objective(cs, cfg));
}
BENCHMARK(BM_SuperchargeObjective)->Arg(4)->Arg(20);

void BM_TheoremCountsOnly(benchmark::State& state) {
  gllab::ExperimentConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.m = 2;
  for (auto _ : state) benchmark::DoNotOptimize(gllab::run_theorem_experiment(cfg));
}
BENCHMARK(BM_TheoremCountsOnly)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
