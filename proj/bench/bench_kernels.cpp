// OpenMP kernels against the serial reference versions, on 1-D and 3-D grids.
#include <benchmark/benchmark.h>

#include <random>

#include "imexllg/dynamics.hpp"
#include "imexllg/grid.hpp"
#include "imexllg/helmholtz.hpp"
#include "imexllg/parallel.hpp"
#include "imexllg/reference.hpp"

namespace {

llg::VectorField random_unit(const llg::GridSpec& g) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  return llg::sample(g, [&](const llg::Vec3&) {
    llg::Vec3 v{d(rng), d(rng), d(rng)};
    const double len = std::sqrt(llg::dot(v, v));
    return llg::Vec3{v[0] / len, v[1] / len, v[2] / len};
  });
}

llg::GridSpec grid_for(const benchmark::State& state) {
  return llg::GridSpec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({1, 4096})->Args({1, 65536})->Args({3, 16})->Args({3, 32})->Args({3, 64});
}

template <bool Reference>
void BM_Laplacian(benchmark::State& state) {
  const llg::GridSpec g = grid_for(state);
  const llg::VectorField m = random_unit(g);
  llg::VectorField out(g);
  for (auto _ : state) {
    if constexpr (Reference) llg::reference::laplacian(m, out);
    else llg::laplacian(m, out);
    benchmark::DoNotOptimize(out.component(0).data());
  }
  state.SetItemsProcessed(state.iterations() * g.interior_size());
}

template <bool Reference>
void BM_NonlinearPart(benchmark::State& state) {
  const llg::GridSpec g = grid_for(state);
  const llg::VectorField m = random_unit(g);
  llg::ModelConfig cfg;
  llg::VectorField out(g);
  llg::VectorField scratch(g);
  for (auto _ : state) {
    if constexpr (Reference) llg::reference::nonlinear_part(cfg, m, 0.0, out);
    else llg::nonlinear_part(cfg, m, 0.0, out, scratch);
    benchmark::DoNotOptimize(out.component(0).data());
  }
  state.SetItemsProcessed(state.iterations() * g.interior_size());
}

template <bool Reference>
void BM_Norms(benchmark::State& state) {
  const llg::GridSpec g = grid_for(state);
  const llg::VectorField m = random_unit(g);
  for (auto _ : state) {
    llg::Norms n = Reference ? llg::reference::norms(m) : llg::norms(m);
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * g.interior_size());
}

template <bool Reference>
void BM_Inner(benchmark::State& state) {
  const llg::GridSpec g = grid_for(state);
  const llg::VectorField a = random_unit(g);
  const llg::VectorField b = random_unit(g);
  for (auto _ : state) {
    double v = Reference ? llg::reference::inner(a, b) : llg::inner(a, b);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * g.interior_size());
}

void BM_StageSolve(benchmark::State& state) {
  const llg::GridSpec g = grid_for(state);
  const llg::StageSystem sys(g, 0.1);
  const llg::VectorField rhs = random_unit(g);
  llg::VectorField u(g);
  for (auto _ : state) {
    sys.solve(rhs, u);
    benchmark::DoNotOptimize(u.component(0).data());
  }
  state.SetItemsProcessed(state.iterations() * g.interior_size());
}

}  // namespace

BENCHMARK(BM_Laplacian<true>)->Name("laplacian/serial_reference")->Apply(sizes);
BENCHMARK(BM_Laplacian<false>)->Name("laplacian/openmp")->Apply(sizes);
BENCHMARK(BM_NonlinearPart<true>)->Name("nonlinear_part/serial_reference")->Apply(sizes);
BENCHMARK(BM_NonlinearPart<false>)->Name("nonlinear_part/openmp")->Apply(sizes);
BENCHMARK(BM_Norms<true>)->Name("norms/serial_reference")->Apply(sizes);
BENCHMARK(BM_Norms<false>)->Name("norms/openmp")->Apply(sizes);
BENCHMARK(BM_Inner<true>)->Name("inner/serial_reference")->Apply(sizes);
BENCHMARK(BM_Inner<false>)->Name("inner/openmp")->Apply(sizes);
BENCHMARK(BM_StageSolve)->Name("stage_solve/openmp")->Args({1, 4096})->Args({3, 16})->Args({3, 32});

int main(int argc, char** argv) {
  llg::parallel::configure_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
