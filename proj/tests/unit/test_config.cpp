#include <filesystem>
#include <fstream>

#include "adjamr/config.hpp"
#include "adjamr/errors.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adjamr;

namespace {

const char* kInterface = R"(
# interface example
[problem]
system = acoustics-1d
xlo = -5
xhi = 3
nx = 1000
t_final = 20

[material]
bulk = 1
density = 1
layer = 0 3 1 4

[initial]
type = gaussian
x = -2
beta = 50

[adjoint]
functional = box 1.8 2.3
weights = 1, 0
t_start = 18

[gauges]
gauge = 1 2.0
)";

int parse_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("the 1D interface parameters are echoed") {
  const RunConfig c = parse_config(kInterface);
  CHECK(c.system == SystemKind::Acoustics1D);
  CHECK(c.domain.dims == 1);
  CHECK(c.domain.xlo == -5.0);
  CHECK(c.domain.xhi == 3.0);
  CHECK(c.cells[0] == 1000);
  CHECK(c.t_final == 20.0);
  CHECK(c.output_times == std::vector<double>{20.0});
  CHECK(c.bulk == 1.0);
  CHECK(c.density == 1.0);
  REQUIRE(c.layers.size() == 1);
  CHECK(c.layers[0].xlo == 0.0);
  CHECK(c.layers[0].density == 4.0);
  CHECK(c.initial.kind == InitialSpec::Kind::Gaussian);
  CHECK(c.initial.beta == 50.0);
  CHECK(c.initial.x == -2.0);
  CHECK(c.has_functional);
  CHECK(c.functional.xlo == 1.8);
  CHECK(c.functional.xhi == 2.3);
  CHECK(c.functional.weights == std::vector<double>{1.0, 0.0});
  CHECK(c.window.t_start == 18.0);
  CHECK(c.window.t_final == 20.0);
  REQUIRE(c.gauges.size() == 1);
  CHECK(c.gauges[0].location.x == 2.0);

  const MaterialModel m = c.material();
  CHECK(m.at({-1.0, 0.0}).density == 1.0);
  CHECK(m.at({1.0, 0.0}).density == 4.0);

  std::vector<double> q(2);
  c.initial_state()({-2.0, 0.0}, q);
  CHECK(q[0] == doctest::Approx(1.0));
  c.initial_state()({-1.8, 0.0}, q);
  CHECK(q[0] == doctest::Approx(std::exp(-50 * 0.04)));
}

TEST_CASE("defaults") {
  const RunConfig c = parse_config(kInterface);
  CHECK(c.limiter == LimiterKind::MC);
  CHECK(c.courant == 0.9);
  CHECK(c.max_levels == 1);
  CHECK(c.regrid_interval == 2);
  CHECK(c.buffer_cells == 2);
  CHECK(c.strategy == StrategyKind::Difference);
  CHECK(c.adjoint_tolerance == 0.02);
  CHECK(c.difference_tolerance == 0.1);
  CHECK(c.boundary.sides[0] == BoundaryCondition::Wall);
  CHECK(c.adjoint_cells == Index2{1000, 1});
}

TEST_CASE("validation errors name the line") {
  const std::string base = kInterface;
  SUBCASE("gauge outside the domain") {
    std::string t = base;
    t.replace(t.find("gauge = 1 2.0"), 13, "gauge = 1 99");
    CHECK(parse_error_line(t) == 26);
  }
  SUBCASE("unknown key") {
    CHECK(parse_error_line(base + "[amr]\ncolour = blue\n") == 28);
  }
  SUBCASE("duplicate key") {
    CHECK(parse_error_line(base + "[amr]\nbuffer = 2\nbuffer = 3\n") == 29);
  }
  SUBCASE("unknown section") {
    CHECK(parse_error_line(base + "[output]\n") == 27);
  }
  SUBCASE("malformed number") {
    std::string t = base;
    t.replace(t.find("beta = 50"), 9, "beta = 5o");
    CHECK(parse_error_line(t) == 18);
  }
  SUBCASE("missing required key") {
    std::string t = base;
    t.replace(t.find("nx = 1000"), 9, "");
    CHECK(parse_error_line(t) == 3);
  }
  SUBCASE("adjoint flagging without a functional") {
    CHECK_THROWS_AS(parse_config("[problem]\nsystem = acoustics-1d\nxlo = 0\nxhi = 1\nnx = 10\nt_final = 1\n"
                                 "[flagging]\nstrategy = adjoint\n"),
                    ParseError);
  }
  SUBCASE("unknown limiter") {
    CHECK(parse_error_line(base + "[amr]\n") == -1);
    std::string t = base;
    t.replace(t.find("t_final = 20"), 12, "t_final = 20\nlimiter = vanleer");
    CHECK(parse_error_line(t) == 9);
  }
}

TEST_CASE("key order within a section does not matter") {
  std::string a = kInterface;
  std::string b = a;
  b.replace(b.find("xlo = -5\nxhi = 3"), 16, "xhi = 3\nxlo = -5");
  const RunConfig ca = parse_config(a);
  const RunConfig cb = parse_config(b);
  CHECK(ca.domain.xlo == cb.domain.xlo);
  CHECK(ca.domain.xhi == cb.domain.xhi);
}

TEST_CASE("every bundled configuration loads") {
  for (const auto& entry : std::filesystem::directory_iterator(ADJAMR_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
  }
  CHECK_THROWS_AS(load_config(testutil::config_path("missing.cfg")), ConfigError);
}

TEST_CASE("bundled 2D and basin settings") {
  const RunConfig tr = load_config(testutil::config_path("2d-walls-timerange.cfg"));
  CHECK(tr.system == SystemKind::Acoustics2D);
  CHECK(tr.cells == Index2{50, 50});
  CHECK(tr.domain.xlo == -4.0);
  CHECK(tr.domain.yhi == 11.0);
  CHECK(tr.bulk == 4.0);
  CHECK(tr.max_levels == 3);
  CHECK(tr.ratios == std::vector<int>{2, 2});
  CHECK(tr.adjoint_tolerance == 0.02);
  CHECK(tr.difference_tolerance == 0.1);
  REQUIRE(tr.gauges.size() == 1);
  CHECK(tr.gauges[0].location.x == 3.5);
  CHECK(tr.gauges[0].location.y == 0.5);
  CHECK(tr.functional.weights == std::vector<double>{2.0, 0.0, 0.0});

  const RunConfig swe = load_config(testutil::config_path("swe-basin.cfg"));
  CHECK(swe.system == SystemKind::SweLinear2D);
  CHECK(swe.functional.shape == FunctionalSpec::Shape::Disk);
  const EquationSet eq = swe.forward();
  CHECK_FALSE(eq.material.at({95000, 50000}).wet);
  CHECK(eq.material.at({50000, 50000}).wet);
}

TEST_CASE("plane-wave exact solution") {
  const RunConfig c = load_config(testutil::config_path("convergence-1d.cfg"));
  std::vector<double> q0(2), q1(2);
  // Speed 2 on a unit periodic domain: period 0.5.
  plane_wave_average(c, {0.3, 0.0}, 0.02, 1.0, 0.0, q0);
  plane_wave_average(c, {0.3, 0.0}, 0.02, 1.0, 0.5, q1);
  CHECK(q1[0] == doctest::Approx(q0[0]).epsilon(1e-12));
  CHECK(q1[1] == doctest::Approx(q0[1]).epsilon(1e-12));
  CHECK_THROWS_AS(plane_wave_average(parse_config(kInterface), {0.3, 0}, 0.1, 1, 0, q0), UnsupportedConfigError);
}
