// Serial reference vs OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "punctlab/kernels.hpp"
#include "punctlab/metrics.hpp"
#include "punctlab/search.hpp"

using namespace punctlab;

namespace {

Exec mode(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

std::vector<cplx> circle(std::size_t n, double r) {
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(r, 2.0 * std::numbers::pi * j / n);
  return z;
}

void BM_LogDensities(benchmark::State& state) {
  const HoloMap f = make_map(HoloExpr::parse("exp(1/z)*sin(z)"));
  const std::vector<cplx> z = vogel_points(cplx{0.3, 0.1}, 0.2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(log_densities(f, z, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluatePoints(benchmark::State& state) {
  const HoloMap f = make_map(HoloExpr::parse("exp(1/z)"));
  const std::vector<cplx> z = circle(static_cast<std::size_t>(state.range(0)), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_points(f, z, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FarthestPair(benchmark::State& state) {
  const HoloMap f = make_map(HoloExpr::parse("exp(1/z)"));
  std::vector<Vec3> pts;
  for (const EvalResult& v : evaluate_points(f, circle(static_cast<std::size_t>(state.range(0)), 0.1))) {
    pts.push_back(to_unit_sphere(v.point));
  }
  for (auto _ : state) benchmark::DoNotOptimize(farthest_pair(pts, mode(state)));
}

void BM_CircleDiameter(benchmark::State& state) {
  const HoloMap f = make_map(HoloExpr::parse("exp(1/z)"));
  DiameterOptions opt;
  opt.samples = static_cast<std::size_t>(state.range(0));
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(diam_circle_image(f, 1e-3, opt));
}

}  // namespace

BENCHMARK(BM_LogDensities)->ArgsProduct({{4096, 65536}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_EvaluatePoints)->ArgsProduct({{4096, 65536}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_FarthestPair)->ArgsProduct({{1024, 4096}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_CircleDiameter)->ArgsProduct({{1024}, {0, 1}})->ArgNames({"n", "parallel"});

BENCHMARK_MAIN();
