#include <algorithm>
#include <cmath>

#include "adjamr/errors.hpp"
#include "adjamr/solver.hpp"

namespace adjamr {

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Wall: return "wall";
    case BoundaryCondition::Outflow: return "outflow";
    case BoundaryCondition::Periodic: return "periodic";
  }
  return "unknown";
}

BoundaryCondition boundary_from_string(const std::string& name) {
  if (name == "wall") return BoundaryCondition::Wall;
  if (name == "outflow") return BoundaryCondition::Outflow;
  if (name == "periodic") return BoundaryCondition::Periodic;
  throw ConfigError("unknown boundary condition '" + name + "'");
}

std::string to_string(LimiterKind l) {
  switch (l) {
    case LimiterKind::None: return "none";
    case LimiterKind::Minmod: return "minmod";
    case LimiterKind::MC: return "mc";
    case LimiterKind::Superbee: return "superbee";
  }
  return "unknown";
}

LimiterKind limiter_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "none") return LimiterKind::None;
  if (s == "minmod") return LimiterKind::Minmod;
  if (s == "mc") return LimiterKind::MC;
  if (s == "superbee") return LimiterKind::Superbee;
  throw ConfigError("unknown limiter '" + name + "'");
}

double limiter_phi(LimiterKind kind, double theta) {
  switch (kind) {
    case LimiterKind::None: return 1.0;
    case LimiterKind::Minmod: return std::max(0.0, std::min(1.0, theta));
    case LimiterKind::MC:
      return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta}));
    case LimiterKind::Superbee:
      return std::max({0.0, std::min(1.0, 2.0 * theta), std::min(2.0, theta)});
  }
  return 1.0;
}

bool CoeffField::any_dry() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellCoeffs& c) { return !c.wet; });
}

namespace {

Index2 level_cells(const Domain& domain, const PatchSpec& spec) {
  Index2 n{static_cast<int>(std::lround((domain.xhi - domain.xlo) / spec.dx)), 1};
  if (domain.dims == 2) n[1] = static_cast<int>(std::lround((domain.yhi - domain.ylo) / spec.dy));
  return n;
}

int map_index(int i, int n, BoundaryCondition lower, BoundaryCondition upper) {
  if (i < 0) {
    switch (lower) {
      case BoundaryCondition::Wall: return -1 - i;
      case BoundaryCondition::Outflow: return 0;
      case BoundaryCondition::Periodic: return i + n;
    }
  } else if (i >= n) {
    switch (upper) {
      case BoundaryCondition::Wall: return 2 * n - 1 - i;
      case BoundaryCondition::Outflow: return n - 1;
      case BoundaryCondition::Periodic: return i - n;
    }
  }
  return i;
}

}  // namespace

CoeffField build_coeffs(const EquationSet& eq, const PatchSpec& spec, const Domain& domain,
                        const BoundarySpec& bc) {
  CoeffField f;
  f.spec = spec;
  f.cells.resize(static_cast<std::size_t>(spec.total_x()) * static_cast<std::size_t>(spec.total_y()));
  const Index2 n = level_cells(domain, spec);
  std::size_t idx = 0;
  for (int j = spec.lo[1] - spec.ghost_y(); j <= spec.hi[1] + spec.ghost_y(); ++j) {
    const int jm = spec.dims == 2 ? map_index(j, n[1], bc[Side::Bottom], bc[Side::Top]) : 0;
    for (int i = spec.lo[0] - spec.ghost_x(); i <= spec.hi[0] + spec.ghost_x(); ++i) {
      const int im = map_index(i, n[0], bc[Side::Left], bc[Side::Right]);
      Point p;
      p.x = spec.origin.x + (im + 0.5) * spec.dx;
      p.y = spec.dims == 2 ? spec.origin.y + (jm + 0.5) * spec.dy : spec.origin.y;
      f.cells[idx++] = eq.coeffs(eq.material.at(p));
    }
  }
  return f;
}

void fill_ghost_physical(Patch& patch, const Domain& domain, const BoundarySpec& bc,
                         const EquationSet& eq) {
  const PatchSpec& s = patch.spec();
  const int m = patch.m();
  const Index2 n = level_cells(domain, s);
  const int gx = s.ghost_x(), gy = s.ghost_y();

  auto copy_cell = [&](int it, int jt, int is, int js, int negate) {
    for (int k = 0; k < m; ++k) {
      double v = patch.at(is, js, k);
      if (k == negate) v = -v;
      patch.at(it, jt, k) = v;
    }
  };

  auto fill_x = [&](bool left) {
    const BoundaryCondition cond = left ? bc[Side::Left] : bc[Side::Right];
    if (cond == BoundaryCondition::Periodic && (s.lo[0] != 0 || s.hi[0] != n[0] - 1)) {
      throw ConfigError("periodic boundary requires a patch spanning the domain in x");
    }
    const int negate = cond == BoundaryCondition::Wall ? EquationSet::normal_component(Direction::X) : -1;
    for (int j = s.lo[1] - gy; j <= s.hi[1] + gy; ++j) {
      for (int g = 1; g <= gx; ++g) {
        const int it = left ? -g : n[0] - 1 + g;
        const int is = map_index(it, n[0], bc[Side::Left], bc[Side::Right]);
        copy_cell(it, j, is, j, negate);
      }
    }
  };
  if (s.lo[0] == 0) fill_x(true);
  if (s.hi[0] == n[0] - 1) fill_x(false);
  if (s.dims == 1) return;

  auto fill_y = [&](bool bottom) {
    const BoundaryCondition cond = bottom ? bc[Side::Bottom] : bc[Side::Top];
    if (cond == BoundaryCondition::Periodic && (s.lo[1] != 0 || s.hi[1] != n[1] - 1)) {
      throw ConfigError("periodic boundary requires a patch spanning the domain in y");
    }
    const int negate = cond == BoundaryCondition::Wall ? EquationSet::normal_component(Direction::Y) : -1;
    (void)eq;
    for (int i = s.lo[0] - gx; i <= s.hi[0] + gx; ++i) {
      for (int g = 1; g <= gy; ++g) {
        const int jt = bottom ? -g : n[1] - 1 + g;
        const int js = map_index(jt, n[1], bc[Side::Bottom], bc[Side::Top]);
        copy_cell(i, jt, i, js, negate);
      }
    }
  };
  if (s.lo[1] == 0) fill_y(true);
  if (s.hi[1] == n[1] - 1) fill_y(false);
}

}  // namespace adjamr
