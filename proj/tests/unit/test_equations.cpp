#include <algorithm>
#include <cmath>
#include <random>

#include "adjamr/equations.hpp"
#include "adjamr/errors.hpp"
#include "doctest.h"

using namespace adjamr;

namespace {

CellMaterial acoustic(double k, double rho) {
  CellMaterial m;
  m.bulk = k;
  m.density = rho;
  return m;
}

CellMaterial water(double depth, double g = 9.81) {
  CellMaterial m;
  m.depth = depth;
  m.gravity = g;
  m.wet = depth > 0.0;
  return m;
}

StateVec wave_sum(const RiemannResult& r) {
  StateVec s{};
  for (int w = 0; w < r.num_waves; ++w) {
    for (int k = 0; k < r.m; ++k) s[k] += r.waves[w][k];
  }
  return s;
}

double vec_max(const StateVec& v, int m) {
  double x = 0.0;
  for (int k = 0; k < m; ++k) x = std::max(x, std::abs(v[k]));
  return x;
}

}  // namespace

TEST_CASE("acoustics 1D: equal states give zero waves") {
  const double q[2] = {0.3, -1.2};
  const RiemannResult r = acoustics_rp_1d(q, q, acoustic(1, 1), acoustic(3, 0.5));
  for (int w = 0; w < r.num_waves; ++w) CHECK(vec_max(r.waves[w], 2) == 0.0);
}

TEST_CASE("acoustics 1D: unit pressure jump in a unit medium") {
  const double ql[2] = {1, 0}, qr[2] = {0, 0};
  const RiemannResult r = acoustics_rp_1d(ql, qr, acoustic(1, 1), acoustic(1, 1));
  REQUIRE(r.num_waves == 2);
  CHECK(r.speeds[0] == doctest::Approx(-1));
  CHECK(r.speeds[1] == doctest::Approx(1));
  CHECK(r.waves[0][0] == doctest::Approx(-0.5));
  CHECK(r.waves[0][1] == doctest::Approx(0.5));
  CHECK(r.waves[1][0] == doctest::Approx(-0.5));
  CHECK(r.waves[1][1] == doctest::Approx(-0.5));
  // Middle state q_left + W1.
  CHECK(ql[0] + r.waves[0][0] == doctest::Approx(0.5));
  CHECK(ql[1] + r.waves[0][1] == doctest::Approx(0.5));
}

TEST_CASE("acoustics 1D: impedance jump reflection and transmission coefficients") {
  // Incident right-going wave of unit pressure from Z = 1 into Z = 2. The
  // state behind the incident wave is (1, 1/Z1); ahead is the medium at rest.
  // Solving at the interface gives the transmitted wave, and the left-going
  // wave carries the reflected pressure.
  const CellMaterial left = acoustic(1, 1), right = acoustic(1, 4);
  const double z1 = 1.0, z2 = 2.0;
  const double ql[2] = {1.0, 1.0 / z1}, qr[2] = {0.0, 0.0};
  const RiemannResult r = acoustics_rp_1d(ql, qr, left, right);
  const double reflected = r.waves[0][0];
  const double transmitted = -r.waves[1][0];
  // Pressure in the middle region equals the transmitted pressure.
  CHECK(ql[0] + r.waves[0][0] == doctest::Approx(transmitted));
  CHECK(reflected == doctest::Approx((z2 - z1) / (z1 + z2)));
  CHECK(transmitted == doctest::Approx(2 * z2 / (z1 + z2)));
  CHECK(transmitted == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("acoustics 1D: invalid materials") {
  const double q[2] = {0, 0};
  CHECK_THROWS_AS(acoustics_rp_1d(q, q, acoustic(0, 1), acoustic(1, 1)), InvalidMaterialError);
  CHECK_THROWS_AS(acoustics_rp_1d(q, q, acoustic(1, 1), acoustic(1, -2)), InvalidMaterialError);
}

TEST_CASE("acoustics 2D normal solve") {
  const CellMaterial m = acoustic(4, 1);
  SUBCASE("zero jump") {
    const double q[3] = {1, 2, 3};
    const RiemannResult r = acoustics_rp_normal_2d(Direction::X, q, q, m, m);
    for (int w = 0; w < 3; ++w) CHECK(vec_max(r.waves[w], 3) == 0.0);
  }
  SUBCASE("pressure jump with c = 2, Z = 2") {
    const double ql[3] = {1, 0, 0}, qr[3] = {0, 0, 0};
    const RiemannResult r = acoustics_rp_normal_2d(Direction::X, ql, qr, m, m);
    CHECK(r.speeds[0] == doctest::Approx(-2));
    CHECK(r.speeds[1] == doctest::Approx(2));
    CHECK(r.waves[0][0] == doctest::Approx(-0.5));
    CHECK(r.waves[1][0] == doctest::Approx(-0.5));
    // Velocity parts are the pressure parts divided by -Z and +Z.
    CHECK(r.waves[0][1] == doctest::Approx(0.25));
    CHECK(r.waves[1][1] == doctest::Approx(-0.25));
    CHECK(r.waves[0][2] == 0.0);
  }
  SUBCASE("y direction couples pressure with v") {
    const double ql[3] = {1, 0, 0}, qr[3] = {0, 0, 0};
    const RiemannResult r = acoustics_rp_normal_2d(Direction::Y, ql, qr, m, m);
    CHECK(r.waves[0][2] == doctest::Approx(0.25));
    CHECK(r.waves[0][1] == 0.0);
  }
  SUBCASE("transverse velocity jump is carried passively") {
    const double ql[3] = {0, 0, 1}, qr[3] = {0, 0, 0};
    const RiemannResult r = acoustics_rp_normal_2d(Direction::X, ql, qr, m, m);
    CHECK(vec_max(r.waves[0], 3) == 0.0);
    CHECK(vec_max(r.waves[1], 3) == 0.0);
    CHECK(r.speeds[2] == 0.0);
    CHECK(vec_max(r.fluct_minus, 3) == 0.0);
    CHECK(vec_max(r.fluct_plus, 3) == 0.0);
  }
}

TEST_CASE("acoustics 2D transverse split") {
  const CellMaterial m = acoustic(4, 1);
  SUBCASE("zero fluctuation") {
    const double f[3] = {0, 0, 0};
    const TransverseSplit s = acoustics_rp_transverse_2d(Direction::X, f, m, m, m);
    CHECK(vec_max(s.down, 3) == 0.0);
    CHECK(vec_max(s.up, 3) == 0.0);
  }
  SUBCASE("fluctuation along the up-going eigenvector") {
    // Up-going in y for an x-normal fluctuation: (Z, 0, 1) with Z = 2.
    const double f[3] = {2, 0, 1};
    const TransverseSplit s = acoustics_rp_transverse_2d(Direction::X, f, m, m, m);
    CHECK(vec_max(s.down, 3) == doctest::Approx(0.0));
    CHECK(s.up[0] == doctest::Approx(4));
    CHECK(s.up[2] == doctest::Approx(2));
  }
  SUBCASE("pressure fluctuation splits evenly") {
    const double f[3] = {1, 0, 0};
    const TransverseSplit s = acoustics_rp_transverse_2d(Direction::X, f, m, m, m);
    // Each part carries pressure 0.5, scaled by the speeds -2 and +2.
    CHECK(s.down[0] == doctest::Approx(-1.0));
    CHECK(s.up[0] == doctest::Approx(1.0));
    CHECK(s.down[2] == doctest::Approx(0.5));
    CHECK(s.up[2] == doctest::Approx(0.5));
  }
}

TEST_CASE("adjoint f-wave solver") {
  SUBCASE("identical states and materials") {
    const double q[2] = {0.4, 0.9};
    const RiemannResult r =
        adjoint_fwave_rp(SystemKind::Acoustics1D, Direction::X, q, q, acoustic(2, 3), acoustic(2, 3));
    CHECK(vec_max(r.waves[0], 2) == 0.0);
    CHECK(vec_max(r.waves[1], 2) == 0.0);
  }
  SUBCASE("unit jump in a unit medium") {
    const double ql[2] = {1, 0}, qr[2] = {0, 0};
    const RiemannResult r =
        adjoint_fwave_rp(SystemKind::Acoustics1D, Direction::X, ql, qr, acoustic(1, 1), acoustic(1, 1));
    CHECK(r.waves[0][0] == doctest::Approx(0.5));
    CHECK(r.waves[0][1] == doctest::Approx(-0.5));
    CHECK(r.waves[1][0] == doctest::Approx(-0.5));
    CHECK(r.waves[1][1] == doctest::Approx(-0.5));
    CHECK(r.speeds[0] == doctest::Approx(-1));
    CHECK(r.speeds[1] == doctest::Approx(1));
  }
  SUBCASE("constant state across a material jump") {
    const double q[2] = {1.0, 0.5};
    const CellMaterial l = acoustic(1, 1), rr = acoustic(3, 2);
    const RiemannResult r = adjoint_fwave_rp(SystemKind::Acoustics1D, Direction::X, q, q, l, rr);
    // A^T = [[0, 1/rho], [K, 0]] evaluated on each side.
    const double df0 = q[1] / 2.0 - q[1] / 1.0;
    const double df1 = 3.0 * q[0] - 1.0 * q[0];
    const StateVec s = wave_sum(r);
    CHECK(s[0] == doctest::Approx(df0));
    CHECK(s[1] == doctest::Approx(df1));
  }
}

TEST_CASE("linear shallow water solver") {
  SUBCASE("zero jump") {
    const double q[3] = {0.1, 2, 3};
    const RiemannResult r = swe_linear_rp(Direction::X, q, q, water(50), water(80));
    CHECK(vec_max(r.waves[0], 3) == 0.0);
    CHECK(vec_max(r.waves[1], 3) == 0.0);
  }
  SUBCASE("gravity wave speeds") {
    const double q[3] = {0, 0, 0};
    const RiemannResult r = swe_linear_rp(Direction::X, q, q, water(100), water(100));
    CHECK(r.speeds[0] == doctest::Approx(-31.32).epsilon(1e-4));
    CHECK(r.speeds[1] == doctest::Approx(std::sqrt(981.0)));
  }
  SUBCASE("surface jump splits symmetrically") {
    const double ql[3] = {1, 0, 0}, qr[3] = {0, 0, 0};
    const RiemannResult r = swe_linear_rp(Direction::X, ql, qr, water(100), water(100));
    CHECK(r.waves[0][0] == doctest::Approx(-0.5));
    CHECK(r.waves[1][0] == doctest::Approx(-0.5));
    CHECK(r.waves[0][1] == doctest::Approx(-r.waves[1][1]));
  }
  SUBCASE("dry cells are rejected") {
    const double q[3] = {0, 0, 0};
    CHECK_THROWS_AS(swe_linear_rp(Direction::X, q, q, water(100), water(-5)), DryCellError);
  }
}

TEST_CASE("wall mirror negates the normal component") {
  const double q[3] = {0.1, 5, 1};
  const StateVec x = wall_mirror(q, 3, Direction::X);
  CHECK(x[0] == 0.1);
  CHECK(x[1] == -5);
  CHECK(x[2] == 1);
  const StateVec y = wall_mirror(q, 3, Direction::Y);
  CHECK(y[1] == 5);
  CHECK(y[2] == -1);
}

namespace {

struct RandomCase {
  std::mt19937_64 rng{20240611};
  std::uniform_real_distribution<double> state{-10.0, 10.0};
  std::uniform_real_distribution<double> logmat{-2.0, 2.0};

  double material() { return std::pow(10.0, logmat(rng)); }
  CellMaterial medium(SystemKind k) {
    return k == SystemKind::SweLinear2D ? water(material() * 100.0) : acoustic(material(), material());
  }
  std::array<double, 3> q() { return {state(rng), state(rng), state(rng)}; }
};

double scale(const StateVec& a, const StateVec& b, int m) {
  return std::max({vec_max(a, m), vec_max(b, m), 1e-300});
}

}  // namespace

TEST_CASE("wave-sum and fluctuation invariants on random inputs") {
  for (SystemKind kind : {SystemKind::Acoustics1D, SystemKind::Acoustics2D, SystemKind::SweLinear2D}) {
    CAPTURE(to_string(kind));
    RandomCase rc;
    const EquationSet eq = EquationSet::forward(kind, MaterialModel::acoustics(1, 1));
    const int m = eq.m();
    int failures = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto ql = rc.q(), qr = rc.q();
      const CellMaterial ml = rc.medium(kind), mr = rc.medium(kind);
      const Direction d = (eq.dims() == 2 && n % 2) ? Direction::Y : Direction::X;
      const CellCoeffs cl = eq.coeffs(ml), cr = eq.coeffs(mr);
      RiemannResult r;
      riemann_solve(eq, d, ql.data(), qr.data(), cl, cr, r);
      StateVec dq{}, sw = wave_sum(r), amdq{};
      for (int k = 0; k < m; ++k) dq[k] = qr[k] - ql[k];
      const double s = scale(dq, sw, m);
      StateVec fluct{};
      for (int w = 0; w < r.num_waves; ++w) {
        for (int k = 0; k < m; ++k) fluct[k] += r.speeds[w] * r.waves[w][k];
      }
      for (int k = 0; k < m; ++k) amdq[k] = r.fluct_minus[k] + r.fluct_plus[k];
      const double fs = scale(fluct, amdq, m);
      const double speed_bound = std::max(cl.c, cr.c) * (1 + 1e-14);
      for (int k = 0; k < m; ++k) {
        if (std::abs(sw[k] - dq[k]) > 1e-12 * s) ++failures;
        if (std::abs(amdq[k] - fluct[k]) > 1e-12 * fs) ++failures;
      }
      for (int w = 0; w < r.num_waves; ++w) {
        if (std::abs(r.speeds[w]) > speed_bound) ++failures;
      }
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("f-wave flux reconstruction on random inputs") {
  for (SystemKind kind : {SystemKind::Acoustics1D, SystemKind::Acoustics2D, SystemKind::SweLinear2D}) {
    CAPTURE(to_string(kind));
    RandomCase rc;
    const EquationSet fwd = EquationSet::forward(kind, MaterialModel::acoustics(1, 1));
    const EquationSet adj = EquationSet::adjoint(kind, MaterialModel::acoustics(1, 1), false);
    const int m = adj.m();
    int failures = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto ql = rc.q(), qr = rc.q();
      const CellMaterial ml = rc.medium(kind), mr = rc.medium(kind);
      const Direction d = (adj.dims() == 2 && n % 2) ? Direction::Y : Direction::X;
      const RiemannResult r = adjoint_fwave_rp(kind, d, ql, qr, ml, mr);
      StateVec fl{}, fr{}, df{}, sum = wave_sum(r), fluct{};
      adj.flux(d, ql, adj.coeffs(ml), fl);
      adj.flux(d, qr, adj.coeffs(mr), fr);
      for (int k = 0; k < m; ++k) {
        df[k] = fr[k] - fl[k];
        fluct[k] = r.fluct_minus[k] + r.fluct_plus[k];
      }
      const double s = scale(df, sum, m);
      for (int k = 0; k < m; ++k) {
        if (std::abs(sum[k] - df[k]) > 1e-12 * s) ++failures;
        if (std::abs(fluct[k] - df[k]) > 1e-12 * s) ++failures;
      }
      // Same speeds as the forward wave solver for the same materials.
      RiemannResult f;
      riemann_solve(fwd, d, ql.data(), qr.data(), fwd.coeffs(ml), fwd.coeffs(mr), f);
      for (int w = 0; w < r.num_waves; ++w) {
        if (std::abs(f.speeds[w] - r.speeds[w]) > 1e-14 * (std::abs(f.speeds[w]) + 1e-300)) ++failures;
      }
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("system names round trip") {
  for (SystemKind k : {SystemKind::Acoustics1D, SystemKind::Acoustics2D, SystemKind::SweLinear2D}) {
    CHECK(system_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(system_from_string("euler"), ConfigError);
}

TEST_CASE("shallow water material from bathymetry") {
  const MaterialModel m = MaterialModel::shallow_water(
      -100, 0, 9.81, {BathymetryRamp{0, 10, 20, 150}}, {BathymetryIsland{0, 0, 2, 50}});
  CHECK(m.at({-50, 30}).depth == doctest::Approx(100));
  CHECK(m.at({15, 30}).depth == doctest::Approx(25));
  CHECK_FALSE(m.at({25, 30}).wet);
  CHECK(m.at({0, 0}).depth == doctest::Approx(50));
}
