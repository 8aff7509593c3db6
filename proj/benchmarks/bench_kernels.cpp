// Kernel timings on cavity meshes: matrix-vector products, operator
// assembly and one pressure solve. The argument is the cells per edge.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <numeric>

#include "ellcfd/cases.hpp"
#include "ellcfd/fvm.hpp"
#include "ellcfd/linsolve.hpp"

using namespace ellcfd;

namespace {

struct Fixture {
  explicit Fixture(Index n) {
    auto g = cavity_case(n);
    d = Domain::build(g.mesh);
    auto fields = initial_fields(g.config, d.mesh);
    u = std::move(fields.first);
    p = std::move(fields.second);
    flux.assign(d.mesh.n_faces(), 0.0);
    for (Index f = 0; f < d.mesh.n_internal_faces(); ++f) flux[f] = 1e-3 * d.geom.face_area[f].x;
    lap = fvm::laplacian(1.0, p, d, SchemeConfig{}).matrix;
    // The all-Neumann pressure operator is singular; shift it to SPD.
    lap *= -1.0;
    for (Index c = 0; c < d.n_cells(); ++c) lap.add_to_diagonal(c, 1e-6 * lap.diagonal_value(c));
    x.resize(d.n_cells());
    std::iota(x.begin(), x.end(), 0.0);
  }

  Domain d;
  VectorField u;
  ScalarField p;
  std::vector<double> flux;
  HybridMatrix lap;
  std::vector<double> x;
};

Fixture& fixture(Index n) {
  static std::map<Index, std::unique_ptr<Fixture>> cache;
  auto& f = cache[n];
  if (!f) f = std::make_unique<Fixture>(n);
  return *f;
}

void set_cells(benchmark::State& state, Index n) {
  state.SetItemsProcessed(state.iterations() * n * n * n);
  state.counters["cells"] = static_cast<double>(n * n * n);
}

void BM_smvp(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  std::vector<double> y(f.x.size());
  for (auto _ : state) {
    f.lap.multiply(f.x, y);
    benchmark::DoNotOptimize(y.data());
  }
  set_cells(state, state.range(0));
}

void BM_stmvp(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  std::vector<double> y(f.x.size());
  for (auto _ : state) {
    f.lap.multiply_transposed(f.x, y);
    benchmark::DoNotOptimize(y.data());
  }
  set_cells(state, state.range(0));
}

void BM_laplacian(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fvm::laplacian(0.01, f.u, f.d, SchemeConfig{}));
  set_cells(state, state.range(0));
}

void BM_divergence(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fvm::divergence(f.flux, f.u, f.d, SchemeConfig{}));
  set_cells(state, state.range(0));
}

void BM_gradient(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fvm::gauss_gradient(f.p, f.d));
  set_cells(state, state.range(0));
}

void BM_cg(benchmark::State& state) {
  Fixture& f = fixture(state.range(0));
  const std::vector<double> b = smvp(f.lap, f.x);
  SolveConfig cfg;
  cfg.tolerance = 1e-6;
  cfg.max_iters = 10000;
  long long iters = 0;
  for (auto _ : state) {
    std::vector<double> sol(b.size(), 0.0);
    iters += cg(f.lap, b, sol, cfg).iterations;
    benchmark::DoNotOptimize(sol.data());
  }
  state.counters["iterations"] = benchmark::Counter(static_cast<double>(iters), benchmark::Counter::kAvgIterations);
  set_cells(state, state.range(0));
}

}  // namespace

BENCHMARK(BM_smvp)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_stmvp)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_laplacian)->Arg(16)->Arg(32);
BENCHMARK(BM_divergence)->Arg(16)->Arg(32);
BENCHMARK(BM_gradient)->Arg(16)->Arg(32);
BENCHMARK(BM_cg)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
