// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>

#include "adjamr/adjoint.hpp"
#include "adjamr/solver.hpp"

namespace {

using namespace adjamr;

struct Setup {
  Domain domain{2, 0.0, 1.0, 0.0, 1.0};
  EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(4.0, 1.0));
  BoundarySpec bc = BoundarySpec::all(BoundaryCondition::Wall);
  PatchSpec spec;
  CoeffField coeffs;
  Patch patch;
  double dt = 0.0;

  explicit Setup(int n) : spec(uniform_grid(domain, n, n)) {
    coeffs = build_coeffs(eq, spec, domain, bc);
    patch = Patch(spec, eq.m());
    for (int j = spec.lo[1]; j <= spec.hi[1]; ++j) {
      for (int i = spec.lo[0]; i <= spec.hi[0]; ++i) {
        const Point c = cell_center(spec, i, j);
        patch.at(i, j, 0) = std::exp(-40.0 * ((c.x - 0.4) * (c.x - 0.4) + (c.y - 0.5) * (c.y - 0.5)));
      }
    }
    fill_ghost_physical(patch, domain, bc, eq);
    dt = select_dt(coeffs, 0.9, 1.0);
  }
};

void BM_StepParallel(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Patch p = s.patch;
    step_patch(p, s.coeffs, s.dt, s.eq, LimiterKind::MC);
    benchmark::DoNotOptimize(p.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_StepSerial(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Patch p = s.patch;
    reference::step_patch(p, s.coeffs, s.dt, s.eq, LimiterKind::MC);
    benchmark::DoNotOptimize(p.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

AdjointSnapshotStore make_store(const Setup& s) {
  FunctionalSpec f;
  f.xlo = 0.6;
  f.xhi = 0.8;
  f.ylo = 0.4;
  f.yhi = 0.6;
  f.weights = {1.0, 0.0, 0.0};
  return solve_adjoint(s.eq, s.domain, s.bc, uniform_grid(s.domain, 50, 50), f, 0.0, 1.0, 16,
                       0.9, LimiterKind::MC);
}

void BM_InnerProductParallel(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const AdjointSnapshotStore store = make_store(s);
  const TimeWindow w{0.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_product_field(s.patch, &s.coeffs, 0.0, store, w));
  }
}

void BM_InnerProductSerial(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const AdjointSnapshotStore store = make_store(s);
  const TimeWindow w{0.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::inner_product_field(s.patch, &s.coeffs, 0.0, store, w));
  }
}

}  // namespace

BENCHMARK(BM_StepParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InnerProductParallel)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InnerProductSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
