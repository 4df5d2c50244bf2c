#include <algorithm>
#include <random>

#include "adjamr/errors.hpp"
#include "adjamr/geometry.hpp"
#include "doctest.h"

using namespace adjamr;

namespace {

PatchSpec spec2d(Index2 lo, Index2 hi, double dx, int level = 1) {
  PatchSpec s;
  s.level = level;
  s.dims = 2;
  s.lo = lo;
  s.hi = hi;
  s.dx = dx;
  s.dy = dx;
  s.origin = {0.0, 0.0};
  return s;
}

Patch make_patch(const PatchSpec& s) { return Patch(s, 1); }

}  // namespace

TEST_CASE("cell_center offsets by half a cell") {
  PatchSpec s;
  s.lo = {0, 0};
  s.hi = {9, 0};
  s.dx = 1.0;
  CHECK(cell_center(s, 0).x == doctest::Approx(0.5));

  s.origin = {-5.0, 0.0};
  s.dx = 0.008;
  s.hi = {999, 0};
  CHECK(cell_center(s, 0).x == doctest::Approx(-4.996).epsilon(1e-14));

  PatchSpec fine = s;
  fine.level = 2;
  fine.dx = s.dx / 2;
  fine.hi = {1999, 0};
  CHECK(cell_center(fine, 0).x == doctest::Approx(-5.0 + fine.dx / 2).epsilon(1e-14));
}

TEST_CASE("cell_center rejects indices outside interior and ghosts") {
  PatchSpec s;
  s.hi = {4, 0};
  CHECK_NOTHROW(cell_center(s, -2));
  CHECK_NOTHROW(cell_center(s, 6));
  CHECK_THROWS_AS(cell_center(s, -3), OutOfRangeError);
  CHECK_THROWS_AS(cell_center(s, 7), OutOfRangeError);
}

TEST_CASE("cell centers increase with spacing dx") {
  const PatchSpec s = spec2d({3, 2}, {40, 17}, 0.37);
  for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
    for (int i = s.lo[0]; i < s.hi[0]; ++i) {
      const double d = cell_center(s, i + 1, j).x - cell_center(s, i, j).x;
      CHECK(d == doctest::Approx(s.dx).epsilon(1e-12));
    }
  }
}

TEST_CASE("PatchSpec validation") {
  PatchSpec s = spec2d({0, 0}, {3, 3}, 1.0);
  CHECK_NOTHROW(s.validate());
  s.hi = {-1, 3};
  CHECK_THROWS_AS(s.validate(), OutOfRangeError);
  s = spec2d({0, 0}, {3, 3}, 0.0);
  CHECK_THROWS_AS(s.validate(), OutOfRangeError);
  s = spec2d({0, 0}, {3, 3}, 1.0);
  s.ghost_width = 1;
  CHECK_THROWS_AS(s.validate(), OutOfRangeError);
}

TEST_CASE("patch storage includes two ghost layers") {
  const Patch p(spec2d({0, 0}, {4, 2}, 1.0), 3);
  CHECK(p.data().size() == static_cast<std::size_t>(9 * 7 * 3));
}

TEST_CASE("bilinear_interpolate reproduces constants, centers and linear fields") {
  Domain d{2, 0.0, 4.0, 0.0, 4.0};
  const PatchSpec g = uniform_grid(d, 4, 4);
  UniformField f(g, 2);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const Point c = cell_center(g, i, j);
      f.at(i, j, 0) = 3.25;
      f.at(i, j, 1) = c.x;
    }
  }
  for (Point p : {Point{0.1, 0.2}, Point{1.7, 3.9}, Point{2.5, 2.5}}) {
    CHECK(bilinear_interpolate(f, p)[0] == doctest::Approx(3.25));
  }
  CHECK(bilinear_interpolate(f, {1.5, 2.5})[1] == doctest::Approx(1.5));
  // Midway between the centers at x = 1.5 and x = 2.5.
  CHECK(bilinear_interpolate(f, {2.0, 1.5})[1] == doctest::Approx(2.0));
  // Outside the outermost centers the value is clamped to the edge column.
  CHECK(bilinear_interpolate(f, {0.1, 1.0})[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(bilinear_interpolate(f, {4.5, 1.0}), OutOfRangeError);
}

TEST_CASE("bilinear_interpolate is linear in the field") {
  Domain d{2, -1.0, 2.0, 0.0, 3.0};
  const PatchSpec g = uniform_grid(d, 7, 5);
  UniformField a(g, 1), b(g, 1), c(g, 1);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double alpha = 0.7, beta = -1.3;
  for (std::size_t n = 0; n < a.values.size(); ++n) {
    a.values[n] = u(rng);
    b.values[n] = u(rng);
    c.values[n] = alpha * a.values[n] + beta * b.values[n];
  }
  std::uniform_real_distribution<double> px(-1.0, 2.0), py(0.0, 3.0);
  for (int n = 0; n < 200; ++n) {
    const Point p{px(rng), py(rng)};
    const double lhs = bilinear_interpolate(c, p)[0];
    const double rhs = alpha * bilinear_interpolate(a, p)[0] + beta * bilinear_interpolate(b, p)[0];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("enforce_nesting") {
  PatchHierarchy h;
  h.domain = {2, 0.0, 10.0, 0.0, 10.0};
  h.ratios = {2};
  h.levels.push_back({make_patch(spec2d({0, 0}, {9, 9}, 1.0))});

  SUBCASE("single level") { CHECK(enforce_nesting(h).empty()); }

  SUBCASE("fine patch with a one-cell margin inside its parent") {
    h.levels.push_back({make_patch(spec2d({4, 4}, {11, 11}, 0.5, 2))});
    CHECK(enforce_nesting(h).empty());
  }

  SUBCASE("fine patch touching the physical boundary needs no margin") {
    h.levels.push_back({make_patch(spec2d({0, 0}, {5, 5}, 0.5, 2))});
    CHECK(enforce_nesting(h).empty());
  }

  SUBCASE("fine patch one coarse cell past its parent") {
    h.levels[0] = {make_patch(spec2d({0, 0}, {4, 9}, 1.0))};
    // Coarse cells 2..5 in x: the parent only reaches 4, and the buffer
    // needs 6 as well.
    h.levels.push_back({make_patch(spec2d({4, 4}, {11, 11}, 0.5, 2))});
    const auto v = enforce_nesting(h);
    REQUIRE(v.size() == 1);
    CHECK(v[0].level == 2);
    CHECK(v[0].patch == 0);
    // Brute-force: every reported coarse cell is outside the parent.
    for (const Index2& c : v[0].cells) CHECK(c[0] > 4);
  }

  SUBCASE("invariant under reordering of patch lists") {
    h.levels[0] = {make_patch(spec2d({0, 0}, {4, 9}, 1.0)), make_patch(spec2d({5, 0}, {9, 9}, 1.0))};
    h.levels.push_back({make_patch(spec2d({2, 2}, {7, 7}, 0.5, 2)),
                        make_patch(spec2d({10, 10}, {15, 15}, 0.5, 2))});
    const auto a = enforce_nesting(h);
    std::reverse(h.levels[0].begin(), h.levels[0].end());
    const auto b = enforce_nesting(h);
    CHECK(a.size() == b.size());
    CHECK(a.empty());
  }
}
