#include <benchmark/benchmark.h>

#include <random>

#include "mnls/diagnostics.hpp"
#include "mnls/dynamics.hpp"
#include "mnls/functionals.hpp"
#include "mnls/groundstate.hpp"
#include "mnls/random_fields.hpp"
#include "mnls/spectral.hpp"

using namespace mnls;

namespace {

GridPtr grid_for(const benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  return GridSpec::cube(dim, n, 40.0);
}

FieldVec field_for(const GridPtr& g, int m) {
  std::mt19937_64 rng(1);
  return smooth_random_field(g, m, rng);
}

const auto kShapes = {std::pair{1, 1024}, std::pair{1, 4096}, std::pair{2, 128}, std::pair{3, 32}};

void shapes(benchmark::internal::Benchmark* b) {
  for (auto [dim, n] : kShapes) b->Args({dim, n});
}

}  // namespace

static void BM_Laplacian(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto u = field_for(g, 1)[0];
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Laplacian)->Apply(shapes);

static void BM_StrangStep(benchmark::State& state) {
  const auto g = grid_for(state);
  const ModelParams params(1.0, g->dim(), Coupling(2, {1.0, 0.5, 0.5, 1.0}));
  auto v = field_for(g, 2);
  for (auto _ : state) v = strang_step(v, params, 1e-3);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_StrangStep)->Apply(shapes);

static void BM_Report(benchmark::State& state) {
  const auto g = grid_for(state);
  const ModelParams params(1.0, g->dim(), Coupling::uniform(3, 1.0));
  const auto v = field_for(g, 3);
  for (auto _ : state) benchmark::DoNotOptimize(report(v, params));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Report)->Apply(shapes);

static void BM_OrbitalDistance(benchmark::State& state) {
  const auto g = GridSpec::cube(1, static_cast<int>(state.range(0)), 40.0);
  const auto q = field_for(g, 2);
  std::mt19937_64 rng(2);
  const auto v = q + 0.01 * smooth_random_field(g, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(orbital_distance(v, q));
}
BENCHMARK(BM_OrbitalDistance)->Arg(1024)->Arg(4096);

static void BM_GroundStateScalar(benchmark::State& state) {
  const auto g = GridSpec::cube(1, static_cast<int>(state.range(0)), 40.0);
  const ModelParams params(1.0, 1, Coupling::identity(1));
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(g, params));
  state.SetLabel("p = 1, M = 1");
}
BENCHMARK(BM_GroundStateScalar)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
