#include <random>
#include <set>

#include "adjamr/amr.hpp"
#include "adjamr/errors.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adjamr;

namespace {

Patch patch2d(int n, int m = 3) {
  const Domain d{2, 0.0, 1.0 * n, 0.0, 1.0 * n};
  return Patch(uniform_grid(d, n, n), m);
}

FlagContext context(const EquationSet& eq) {
  FlagContext c;
  c.equations = &eq;
  return c;
}

std::set<std::pair<int, int>> flagged(const FlagField& f) {
  std::set<std::pair<int, int>> s;
  for (int j = f.lo[1]; j <= f.hi[1]; ++j)
    for (int i = f.lo[0]; i <= f.hi[0]; ++i)
      if (f.get(i, j)) s.insert({i, j});
  return s;
}

}  // namespace

TEST_CASE("difference strategy") {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1));
  Patch p = patch2d(9);
  const FlaggingStrategy diff{StrategyKind::Difference, 0.1};

  SUBCASE("constant state") {
    testutil::fill(p, [](Point, int) { return 3.0; });
    CHECK(flag_cells(p, diff, context(eq)).empty());
  }
  SUBCASE("single spike flags itself and its face neighbours") {
    p.at(4, 4, 0) = 1.0;
    const auto s = flagged(flag_cells(p, diff, context(eq)));
    const std::set<std::pair<int, int>> want{{4, 4}, {3, 4}, {5, 4}, {4, 3}, {4, 5}};
    CHECK(s == want);
  }
  SUBCASE("any component counts") {
    p.at(4, 4, 2) = -0.2;
    CHECK(flag_cells(p, diff, context(eq)).count() == 5);
  }
  SUBCASE("lowering the tolerance never shrinks the flag set") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    testutil::fill(p, [&](Point, int) { return u(rng); });
    std::set<std::pair<int, int>> prev;
    for (double tol : {0.9, 0.5, 0.3, 0.1, 0.01}) {
      const auto s = flagged(flag_cells(p, {StrategyKind::Difference, tol}, context(eq)));
      for (const auto& c : prev) CHECK(s.count(c) == 1);
      prev = s;
    }
  }
}

TEST_CASE("surface strategy flags wet cells only") {
  const EquationSet eq = EquationSet::forward(
      SystemKind::SweLinear2D, MaterialModel::shallow_water(-10, 0, 9.81, {BathymetryRamp{0, 5, 6, 20}}));
  const Domain d{2, 0.0, 8.0, 0.0, 8.0};
  const PatchSpec spec = uniform_grid(d, 8, 8);
  const CoeffField coeffs = build_coeffs(eq, spec, d, {});
  Patch p(spec, 3);
  testutil::fill(p, [](Point, int k) { return k == 0 ? 0.5 : 0.0; });
  FlagContext ctx = context(eq);
  ctx.coeffs = &coeffs;
  const FlagField f = flag_cells(p, {StrategyKind::Surface, 0.1}, ctx);
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) CHECK(f.get(i, j) == coeffs.at(i, j).wet);
  }
  CHECK(flag_cells(p, {StrategyKind::Surface, 0.6}, ctx).empty());
}

TEST_CASE("adjoint strategy") {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1));
  Patch p = patch2d(6);
  testutil::fill(p, [](Point, int) { return 1.0; });
  SUBCASE("without a store it is a configuration error") {
    CHECK_THROWS_AS(flag_cells(p, {StrategyKind::Adjoint, 0.02}, context(eq)), ConfigError);
  }
  SUBCASE("a zero adjoint flags nothing") {
    AdjointSnapshotStore store;
    store.equations = EquationSet::adjoint(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1), true);
    store.domain = {2, 0.0, 6.0, 0.0, 6.0};
    store.grid = uniform_grid(store.domain, 3, 3);
    store.t0 = 0;
    store.t_final = 1;
    store.interval = 0.5;
    for (int k = 0; k < 3; ++k) store.snapshots.emplace_back(store.grid, 3, 0.5 * k);
    store.wet.assign(9, 1);
    FlagContext ctx = context(eq);
    ctx.store = &store;
    ctx.window = {1.0, 1.0};
    ctx.time = 0.25;
    CHECK(flag_cells(p, {StrategyKind::Adjoint, 0.02}, ctx).empty());
  }
}

TEST_CASE("refinement regions override strategy flags") {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1));
  Patch p = patch2d(10);
  const std::vector<RefinementRegion> regions{
      RefinementRegion{0.0, 4.0, 0.0, 10.0, 0.0, 1.0, 1, 1},  // forbid level 2
      RefinementRegion{6.0, 10.0, 0.0, 10.0, 0.0, 1.0, 2, 5},  // require level 2
  };
  FlagContext ctx = context(eq);
  ctx.regions = regions;
  ctx.time = 0.5;
  const FlagField f = flag_cells(p, {StrategyKind::Everywhere, 0.1}, ctx);
  CHECK_FALSE(f.get(1, 5));
  CHECK(f.get(5, 5));
  const FlagField g = flag_cells(p, {StrategyKind::Difference, 0.1}, ctx);
  CHECK(g.get(8, 5));
  CHECK_FALSE(g.get(5, 5));
  // Applying the same override again changes nothing.
  FlagContext later = ctx;
  const FlagField h = flag_cells(p, {StrategyKind::Difference, 0.1}, later);
  CHECK(h.flags == g.flags);
  // Outside the regions' time interval nothing is forced.
  ctx.time = 2.0;
  CHECK(flag_cells(p, {StrategyKind::Difference, 0.1}, ctx).empty());
}

TEST_CASE("buffer_flags") {
  SUBCASE("empty stays empty") {
    FlagField f({0, 0}, {9, 9});
    CHECK(buffer_flags(f, 2).empty());
  }
  SUBCASE("one cell becomes a 5x5 block") {
    FlagField f({0, 0}, {9, 9});
    f.set(5, 5);
    const FlagField b = buffer_flags(f, 2);
    CHECK(b.count() == 25);
    for (int j = 3; j <= 7; ++j)
      for (int i = 3; i <= 7; ++i) CHECK(b.get(i, j));
  }
  SUBCASE("clipped at the field edge") {
    FlagField f({0, 0}, {9, 9});
    f.set(0, 0);
    CHECK(buffer_flags(f, 2).count() == 9);
  }
  SUBCASE("two cells three apart merge into one run (1D)") {
    FlagField f({0, 0}, {19, 0});
    f.set(5, 0);
    f.set(8, 0);
    const FlagField b = buffer_flags(f, 2);
    CHECK(b.count() == 8);
    for (int i = 3; i <= 10; ++i) CHECK(b.get(i, 0));
  }
  SUBCASE("matches a brute-force dilation") {
    std::mt19937 rng(11);
    FlagField f({-3, 2}, {20, 15});
    for (auto& v : f.flags) v = (rng() % 13 == 0) ? 1 : 0;
    const FlagField b = buffer_flags(f, 3);
    for (int j = f.lo[1]; j <= f.hi[1]; ++j) {
      for (int i = f.lo[0]; i <= f.hi[0]; ++i) {
        bool want = false;
        for (int dj = -3; dj <= 3; ++dj)
          for (int di = -3; di <= 3; ++di)
            if (f.contains(i + di, j + dj) && f.get(i + di, j + dj)) want = true;
        CHECK(b.get(i, j) == want);
      }
    }
  }
  CHECK_THROWS_AS(buffer_flags(FlagField({0, 0}, {1, 1}), -1), OutOfRangeError);
}

TEST_CASE("strategy names round trip") {
  for (StrategyKind k : {StrategyKind::Difference, StrategyKind::Surface, StrategyKind::Adjoint, StrategyKind::Everywhere}) {
    CHECK(strategy_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(strategy_from_string("richardson"), ConfigError);
}
