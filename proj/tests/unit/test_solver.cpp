#include <cmath>
#include <vector>

#include "adjamr/errors.hpp"
#include "adjamr/solver.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adjamr;

namespace {

struct Setup {
  EquationSet eq;
  Domain domain;
  BoundarySpec bc;
  PatchSpec spec;
  CoeffField coeffs;
  Patch patch;

  Setup(EquationSet e, Domain d, int nx, int ny, BoundarySpec b)
      : eq(std::move(e)), domain(d), bc(b), spec(uniform_grid(d, nx, ny)),
        coeffs(build_coeffs(eq, spec, d, b)), patch(spec, eq.m()) {}

  void step(double dt, LimiterKind lim = LimiterKind::MC) {
    fill_ghost_physical(patch, domain, bc, eq);
    step_patch(patch, coeffs, dt, eq, lim);
  }
  double dt(double courant) const { return select_dt(coeffs, courant, 1e9); }
};

EquationSet acoustics1d(double k = 1, double rho = 1) {
  return EquationSet::forward(SystemKind::Acoustics1D, MaterialModel::acoustics(k, rho));
}

}  // namespace

TEST_CASE("limiter functions") {
  for (LimiterKind k : {LimiterKind::None, LimiterKind::Minmod, LimiterKind::MC, LimiterKind::Superbee}) {
    CAPTURE(to_string(k));
    CHECK(limiter_phi(k, 1.0) == doctest::Approx(1.0));
    for (double th = -5.0; th <= 10.0; th += 0.01) {
      const double p = limiter_phi(k, th);
      CHECK(p >= 0.0);
      CHECK(p <= 2.0);
    }
    CHECK(limiter_from_string(to_string(k)) == k);
  }
  CHECK(limiter_from_string("MC") == LimiterKind::MC);
  CHECK(limiter_phi(LimiterKind::MC, 3.0) == doctest::Approx(2.0));
  CHECK(limiter_phi(LimiterKind::Minmod, -1.0) == 0.0);
  CHECK_THROWS_AS(limiter_from_string("vanleer2"), ConfigError);
}

TEST_CASE("physical ghost cells") {
  const Domain d{1, 0.0, 1.0};
  SUBCASE("wall negates the normal velocity") {
    Setup s(acoustics1d(), d, 10, 1, BoundarySpec::all(BoundaryCondition::Wall));
    s.patch.at(0, 0, 0) = 2;
    s.patch.at(0, 0, 1) = 3;
    fill_ghost_physical(s.patch, d, s.bc, s.eq);
    CHECK(s.patch.at(-1, 0, 0) == 2);
    CHECK(s.patch.at(-1, 0, 1) == -3);
  }
  SUBCASE("outflow copies the nearest interior cell") {
    Setup s(acoustics1d(), d, 10, 1, BoundarySpec::all(BoundaryCondition::Outflow));
    s.patch.at(9, 0, 0) = 2;
    s.patch.at(9, 0, 1) = 3;
    fill_ghost_physical(s.patch, d, s.bc, s.eq);
    CHECK(s.patch.at(10, 0, 0) == 2);
    CHECK(s.patch.at(11, 0, 1) == 3);
  }
  SUBCASE("2D wall on top negates v only") {
    const Domain d2{2, 0.0, 1.0, 0.0, 1.0};
    Setup s(EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1)), d2, 4, 4,
            BoundarySpec::all(BoundaryCondition::Wall));
    s.patch.at(2, 3, 0) = 1;
    s.patch.at(2, 3, 1) = 2;
    s.patch.at(2, 3, 2) = 3;
    fill_ghost_physical(s.patch, d2, s.bc, s.eq);
    CHECK(s.patch.at(2, 4, 0) == 1);
    CHECK(s.patch.at(2, 4, 1) == 2);
    CHECK(s.patch.at(2, 4, 2) == -3);
  }
  SUBCASE("periodic wraps") {
    Setup s(acoustics1d(), d, 10, 1, BoundarySpec::all(BoundaryCondition::Periodic));
    s.patch.at(9, 0, 0) = 7;
    s.patch.at(0, 0, 0) = 5;
    fill_ghost_physical(s.patch, d, s.bc, s.eq);
    CHECK(s.patch.at(-1, 0, 0) == 7);
    CHECK(s.patch.at(10, 0, 0) == 5);
  }
  CHECK(boundary_from_string("outflow") == BoundaryCondition::Outflow);
  CHECK_THROWS_AS(boundary_from_string("sponge"), ConfigError);
}

TEST_CASE("select_dt") {
  const Domain d2{2, -4.0, 8.0, -1.0, 11.0};
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(4, 1));
  const PatchSpec g = uniform_grid(d2, 50, 50);
  CHECK(select_dt(build_coeffs(eq, g, d2, {}), 0.9, 1e9) == doctest::Approx(0.108));

  const Domain d1{1, -5.0, 3.0};
  const EquationSet layered = EquationSet::forward(
      SystemKind::Acoustics1D, MaterialModel::acoustics(1, 1, {AcousticLayer{0, 3, -1e300, 1e300, 1, 4}}));
  const PatchSpec g1 = uniform_grid(d1, 1000);
  CHECK(select_dt(build_coeffs(layered, g1, d1, {}), 0.9, 1e9) == doctest::Approx(0.9 * 0.008));

  const EquationSet dry = EquationSet::forward(SystemKind::SweLinear2D,
                                               MaterialModel::shallow_water(10, 0, 9.81));
  CHECK(select_dt(build_coeffs(dry, g, d2, {}), 0.9, 3.5) == 3.5);
}

TEST_CASE("constant states are fixed points") {
  const Domain d2{2, 0.0, 1.0, 0.0, 1.0};
  const std::vector<double> values = {0.7, -0.2, 0.4};
  SUBCASE("acoustics 2D with layers, periodic") {
    const EquationSet eq = EquationSet::forward(
        SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1, {AcousticLayer{0.3, 0.6, 0.2, 0.8, 3, 2}}));
    Setup s(eq, d2, 20, 20, BoundarySpec::all(BoundaryCondition::Periodic));
    testutil::fill(s.patch, [&](Point, int k) { return values[static_cast<std::size_t>(k)]; });
    const Patch before = s.patch;
    for (int n = 0; n < 5; ++n) s.step(s.dt(0.9));
    CHECK(testutil::max_abs_diff(before, s.patch) < 1e-14);
  }
  SUBCASE("walls keep a constant pressure at rest") {
    const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(4, 1));
    Setup s(eq, d2, 16, 12, BoundarySpec::all(BoundaryCondition::Wall));
    testutil::fill(s.patch, [&](Point, int k) { return k == 0 ? 1.5 : 0.0; });
    const Patch before = s.patch;
    for (int n = 0; n < 5; ++n) s.step(s.dt(0.9));
    CHECK(testutil::max_abs_diff(before, s.patch) < 1e-14);
  }
  SUBCASE("1D acoustics, outflow") {
    Setup s(acoustics1d(2, 0.5), {1, 0.0, 1.0}, 40, 1, BoundarySpec::all(BoundaryCondition::Outflow));
    testutil::fill(s.patch, [&](Point, int k) { return values[static_cast<std::size_t>(k)]; });
    const Patch before = s.patch;
    for (int n = 0; n < 5; ++n) s.step(s.dt(0.9));
    CHECK(testutil::max_abs_diff(before, s.patch) < 1e-14);
  }
}

TEST_CASE("d'Alembert: a pressure pulse splits into two half pulses") {
  const double x0 = 5.0, beta = 20.0, T = 2.0;
  Setup s(acoustics1d(), {1, 0.0, 10.0}, 2000, 1, BoundarySpec::all(BoundaryCondition::Outflow));
  testutil::fill(s.patch, [&](Point p, int k) {
    return k == 0 ? std::exp(-beta * (p.x - x0) * (p.x - x0)) : 0.0;
  });
  const double dt = T / std::ceil(T / s.dt(0.9));
  for (double t = 0; t < T - 1e-12; t += dt) s.step(dt);
  double err = 0.0, asym = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = cell_center(s.spec, i).x;
    const double exact = 0.5 * std::exp(-beta * (x - x0 - T) * (x - x0 - T)) +
                         0.5 * std::exp(-beta * (x - x0 + T) * (x - x0 + T));
    err = std::max(err, std::abs(s.patch.at(i, 0, 0) - exact));
    asym = std::max(asym, std::abs(s.patch.at(i, 0, 0) - s.patch.at(1999 - i, 0, 0)));
  }
  CHECK(err < 5e-3);
  CHECK(asym < 1e-12);
}

TEST_CASE("without a limiter the 1D scheme is linear") {
  const Domain d{1, 0.0, 1.0};
  Setup a(acoustics1d(1, 2), d, 64, 1, BoundarySpec::all(BoundaryCondition::Wall));
  Setup b = a, c = a;
  const double alpha = 0.3, beta = -1.7;
  auto f1 = [](Point p, int k) { return k == 0 ? std::sin(7 * p.x) : p.x * p.x; };
  auto f2 = [](Point p, int k) { return k == 0 ? std::exp(-30 * (p.x - 0.4) * (p.x - 0.4)) : std::cos(3 * p.x); };
  testutil::fill(a.patch, f1);
  testutil::fill(b.patch, f2);
  testutil::fill(c.patch, [&](Point p, int k) { return alpha * f1(p, k) + beta * f2(p, k); });
  const double dt = a.dt(0.9);
  for (int n = 0; n < 10; ++n) {
    a.step(dt, LimiterKind::None);
    b.step(dt, LimiterKind::None);
    c.step(dt, LimiterKind::None);
  }
  double d_max = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int k = 0; k < 2; ++k) {
      d_max = std::max(d_max, std::abs(c.patch.at(i, 0, k) - alpha * a.patch.at(i, 0, k) - beta * b.patch.at(i, 0, k)));
    }
  }
  CHECK(d_max < 1e-12);
}

TEST_CASE("wall-bounded acoustics does not gain energy") {
  // c = 1 on [0, 1] with 1000 cells: one transit takes t = 1.
  const double K = 1.0, rho = 1.0;
  Setup s(acoustics1d(K, rho), {1, 0.0, 1.0}, 1000, 1, BoundarySpec::all(BoundaryCondition::Wall));
  testutil::fill(s.patch, [](Point p, int k) { return k == 0 ? std::exp(-200 * (p.x - 0.5) * (p.x - 0.5)) : 0.0; });
  auto energy = [&] {
    double e = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double p = s.patch.at(i, 0, 0), u = s.patch.at(i, 0, 1);
      e += (p * p / (2 * K) + rho * u * u / 2) * s.spec.dx;
    }
    return e;
  };
  const double e0 = energy();
  const double dt = s.dt(0.9);
  double prev = e0;
  bool monotone = true;
  for (double t = 0; t < 1.0; t += dt) {
    s.step(dt);
    const double e = energy();
    monotone = monotone && e <= prev * (1 + 1e-13);
    prev = e;
  }
  CHECK(monotone);
  CHECK((e0 - prev) / e0 < 0.01);
}

TEST_CASE("f-wave adjoint conserves the first component between walls") {
  SUBCASE("1D") {
    const EquationSet eq = EquationSet::adjoint(SystemKind::Acoustics1D, MaterialModel::acoustics(2, 1), true);
    Setup s(eq, {1, 0.0, 1.0}, 200, 1, BoundarySpec::all(BoundaryCondition::Wall));
    testutil::fill(s.patch, [](Point p, int k) { return k == 0 ? (p.x > 0.3 && p.x < 0.5 ? 1.0 : 0.0) : 0.0; });
    auto mass = [&] {
      double m = 0.0;
      for (int i = 0; i < 200; ++i) m += s.patch.at(i, 0, 0);
      return m;
    };
    const double m0 = mass();
    const double dt = s.dt(0.9);
    double worst = 0.0;
    for (int n = 0; n < 300; ++n) {
      const double before = mass();
      s.step(dt);
      worst = std::max(worst, std::abs(mass() - before) / m0);
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("2D shallow water with a symmetric hump") {
    const EquationSet eq = EquationSet::adjoint(SystemKind::SweLinear2D, MaterialModel::shallow_water(-50, 0, 9.81), true);
    const Domain d{2, 0.0, 1000.0, 0.0, 1000.0};
    Setup s(eq, d, 40, 40, BoundarySpec::all(BoundaryCondition::Wall));
    testutil::fill(s.patch, [](Point p, int k) {
      const double r2 = (p.x - 500) * (p.x - 500) + (p.y - 500) * (p.y - 500);
      return k == 0 ? std::exp(-r2 / 2e4) : 0.0;
    });
    auto mass = [&] {
      double m = 0.0;
      for (int j = 0; j < 40; ++j)
        for (int i = 0; i < 40; ++i) m += s.patch.at(i, j, 0);
      return m;
    };
    const double m0 = mass();
    const double dt = s.dt(0.9);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      const double before = mass();
      s.step(dt);
      worst = std::max(worst, std::abs(mass() - before) / m0);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("step_patch errors") {
  Setup s(acoustics1d(), {1, 0.0, 1.0}, 10, 1, BoundarySpec::all(BoundaryCondition::Wall));
  testutil::fill(s.patch, [](Point p, int) { return p.x; });
  fill_ghost_physical(s.patch, s.domain, s.bc, s.eq);
  const Patch before = s.patch;
  SUBCASE("Courant number above one is rejected before any change") {
    CHECK_THROWS_AS(step_patch(s.patch, s.coeffs, 0.2, s.eq, LimiterKind::MC), CflViolationError);
    CHECK(testutil::max_abs_diff(before, s.patch) == 0.0);
    try {
      step_patch(s.patch, s.coeffs, 0.2, s.eq, LimiterKind::MC);
    } catch (const CflViolationError& e) {
      CHECK(e.courant() == doctest::Approx(2.0));
    }
  }
  SUBCASE("non-finite values") {
    s.patch.at(4, 0, 0) = std::nan("");
    CHECK_THROWS_AS(step_patch(s.patch, s.coeffs, 0.05, s.eq, LimiterKind::MC), NumericalBlowupError);
  }
  SUBCASE("the step reports its Courant number and advances time") {
    const StepResult r = step_patch(s.patch, s.coeffs, 0.05, s.eq, LimiterKind::MC);
    CHECK(r.max_courant == doctest::Approx(0.5));
    CHECK(s.patch.time == doctest::Approx(0.05));
  }
}
