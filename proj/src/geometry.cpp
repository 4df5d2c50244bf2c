#include "adjamr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adjamr/errors.hpp"

namespace adjamr {

bool Domain::contains(Point p, double tol) const {
  const double tx = tol * std::max(1.0, xhi - xlo);
  if (p.x < xlo - tx || p.x > xhi + tx) return false;
  if (dims == 2) {
    const double ty = tol * std::max(1.0, yhi - ylo);
    if (p.y < ylo - ty || p.y > yhi + ty) return false;
  }
  return true;
}

void PatchSpec::validate() const {
  if (dims != 1 && dims != 2) throw OutOfRangeError("patch dims must be 1 or 2");
  if (level < 1) throw OutOfRangeError("patch level must be >= 1");
  if (hi[0] < lo[0] || hi[1] < lo[1]) throw OutOfRangeError("patch hi index below lo index");
  if (dims == 1 && (lo[1] != 0 || hi[1] != 0)) throw OutOfRangeError("1D patch must have a single row");
  if (!(dx > 0.0) || (dims == 2 && !(dy > 0.0))) throw OutOfRangeError("cell widths must be positive");
  if (ghost_width < 2) throw OutOfRangeError("ghost width must be at least 2");
}

Point cell_center(const PatchSpec& spec, int i, int j) {
  if (!spec.storage_contains(i, j)) {
    throw OutOfRangeError("cell (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside patch storage");
  }
  Point p;
  p.x = spec.origin.x + (static_cast<double>(i) + 0.5) * spec.dx;
  p.y = spec.dims == 2 ? spec.origin.y + (static_cast<double>(j) + 0.5) * spec.dy : spec.origin.y;
  return p;
}

Patch::Patch(PatchSpec spec, int m) : spec_(spec), m_(m) {
  spec_.validate();
  if (m < 1) throw OutOfRangeError("patch needs at least one component");
  state_.assign(static_cast<std::size_t>(spec_.total_x()) *
                    static_cast<std::size_t>(spec_.total_y()) * static_cast<std::size_t>(m),
                0.0);
}

bool Patch::all_finite() const {
  return std::all_of(state_.begin(), state_.end(), [](double v) { return std::isfinite(v); });
}

UniformField::UniformField(PatchSpec grid, int components, double t)
    : spec(grid), m(components), time(t) {
  values.assign(spec.interior_cells() * static_cast<std::size_t>(m), 0.0);
}

PatchSpec uniform_grid(const Domain& domain, int nx, int ny, int ghost_width) {
  PatchSpec s;
  s.level = 1;
  s.dims = domain.dims;
  s.lo = {0, 0};
  s.hi = {nx - 1, domain.dims == 2 ? ny - 1 : 0};
  s.dx = (domain.xhi - domain.xlo) / nx;
  s.dy = domain.dims == 2 ? (domain.yhi - domain.ylo) / ny : 1.0;
  s.origin = {domain.xlo, domain.dims == 2 ? domain.ylo : 0.0};
  s.ghost_width = ghost_width;
  s.validate();
  return s;
}

AxisStencil axis_stencil(double coord, double origin, double width, int first, int last) {
  const double s = (coord - origin) / width - 0.5;
  if (last <= first || s <= static_cast<double>(first)) return {first, 0.0};
  if (s >= static_cast<double>(last)) return {last - 1, 1.0};
  const double fl = std::floor(s);
  int lower = static_cast<int>(fl);
  if (lower >= last) lower = last - 1;
  return {lower, s - static_cast<double>(lower)};
}

namespace {

Domain field_domain(const PatchSpec& s) {
  Domain d;
  d.dims = s.dims;
  d.xlo = s.origin.x + s.lo[0] * s.dx;
  d.xhi = s.origin.x + (s.hi[0] + 1) * s.dx;
  if (s.dims == 2) {
    d.ylo = s.origin.y + s.lo[1] * s.dy;
    d.yhi = s.origin.y + (s.hi[1] + 1) * s.dy;
  }
  return d;
}

}  // namespace

void bilinear_interpolate(const UniformField& field, Point p, std::span<double> out) {
  const PatchSpec& s = field.spec;
  if (!field_domain(s).contains(p)) {
    throw OutOfRangeError("interpolation point (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ") outside the field's domain");
  }
  const AxisStencil ax = axis_stencil(p.x, s.origin.x, s.dx, s.lo[0], s.hi[0]);
  const int m = field.m;
  if (s.dims == 1) {
    const int i1 = std::min(ax.lower + 1, s.hi[0]);
    for (int k = 0; k < m; ++k) {
      out[static_cast<std::size_t>(k)] =
          (1.0 - ax.weight) * field.at(ax.lower, 0, k) + ax.weight * field.at(i1, 0, k);
    }
    return;
  }
  const AxisStencil ay = axis_stencil(p.y, s.origin.y, s.dy, s.lo[1], s.hi[1]);
  const int i1 = std::min(ax.lower + 1, s.hi[0]);
  const int j1 = std::min(ay.lower + 1, s.hi[1]);
  const double wx = ax.weight, wy = ay.weight;
  for (int k = 0; k < m; ++k) {
    const double v00 = field.at(ax.lower, ay.lower, k);
    const double v10 = field.at(i1, ay.lower, k);
    const double v01 = field.at(ax.lower, j1, k);
    const double v11 = field.at(i1, j1, k);
    out[static_cast<std::size_t>(k)] =
        (1.0 - wy) * ((1.0 - wx) * v00 + wx * v10) + wy * ((1.0 - wx) * v01 + wx * v11);
  }
}

std::vector<double> bilinear_interpolate(const UniformField& field, Point p) {
  std::vector<double> out(static_cast<std::size_t>(field.m));
  bilinear_interpolate(field, p, out);
  return out;
}

void interpolate_patch(const Patch& patch, std::span<const double> state, Point p,
                       std::span<double> out) {
  const PatchSpec& s = patch.spec();
  const int m = patch.m();
  const AxisStencil ax = axis_stencil(p.x, s.origin.x, s.dx, s.lo[0] - s.ghost_x(),
                                      s.hi[0] + s.ghost_x());
  const int i1 = ax.lower + 1;
  if (s.dims == 1) {
    const std::size_t o0 = patch.offset(ax.lower, 0), o1 = patch.offset(i1, 0);
    for (int k = 0; k < m; ++k) {
      out[static_cast<std::size_t>(k)] =
          (1.0 - ax.weight) * state[o0 + k] + ax.weight * state[o1 + k];
    }
    return;
  }
  const AxisStencil ay = axis_stencil(p.y, s.origin.y, s.dy, s.lo[1] - s.ghost_y(),
                                      s.hi[1] + s.ghost_y());
  const int j1 = ay.lower + 1;
  const std::size_t o00 = patch.offset(ax.lower, ay.lower), o10 = patch.offset(i1, ay.lower);
  const std::size_t o01 = patch.offset(ax.lower, j1), o11 = patch.offset(i1, j1);
  const double wx = ax.weight, wy = ay.weight;
  for (int k = 0; k < m; ++k) {
    out[static_cast<std::size_t>(k)] =
        (1.0 - wy) * ((1.0 - wx) * state[o00 + k] + wx * state[o10 + k]) +
        wy * ((1.0 - wx) * state[o01 + k] + wx * state[o11 + k]);
  }
}

namespace {

// Number of cells spanning the domain at the resolution of `spec`.
Index2 level_extent(const Domain& domain, const PatchSpec& spec) {
  Index2 n{static_cast<int>(std::lround((domain.xhi - domain.xlo) / spec.dx)), 1};
  if (domain.dims == 2) n[1] = static_cast<int>(std::lround((domain.yhi - domain.ylo) / spec.dy));
  return n;
}

}  // namespace

std::vector<NestingViolation> enforce_nesting(const Domain& domain, const std::vector<int>& ratios,
                                              const std::vector<std::vector<PatchSpec>>& levels) {
  std::vector<NestingViolation> violations;
  for (std::size_t n = 1; n < levels.size(); ++n) {
    const auto& coarse = levels[n - 1];
    if (coarse.empty()) continue;
    const int r = n - 1 < ratios.size() ? ratios[n - 1] : 2;
    const Index2 extent = level_extent(domain, coarse.front());
    auto covered = [&](int i, int j) {
      return std::any_of(coarse.begin(), coarse.end(),
                         [&](const PatchSpec& c) { return c.interior_contains(i, j); });
    };
    const int jb = domain.dims == 2 ? 1 : 0;
    for (std::size_t p = 0; p < levels[n].size(); ++p) {
      const PatchSpec& f = levels[n][p];
      std::set<Index2> bad;
      const int ci0 = floor_div(f.lo[0], r), ci1 = floor_div(f.hi[0], r);
      const int cj0 = domain.dims == 2 ? floor_div(f.lo[1], r) : 0;
      const int cj1 = domain.dims == 2 ? floor_div(f.hi[1], r) : 0;
      for (int cj = cj0 - jb; cj <= cj1 + jb; ++cj) {
        for (int ci = ci0 - 1; ci <= ci1 + 1; ++ci) {
          if (ci < 0 || ci >= extent[0] || cj < 0 || cj >= extent[1]) continue;
          if (!covered(ci, cj)) bad.insert({ci, cj});
        }
      }
      if (!bad.empty()) {
        violations.push_back({static_cast<int>(n) + 1, static_cast<int>(p),
                              std::vector<Index2>(bad.begin(), bad.end())});
      }
    }
  }
  return violations;
}

std::vector<NestingViolation> enforce_nesting(const PatchHierarchy& hierarchy) {
  std::vector<std::vector<PatchSpec>> layout;
  layout.reserve(hierarchy.levels.size());
  for (const auto& level : hierarchy.levels) {
    std::vector<PatchSpec> specs;
    specs.reserve(level.size());
    for (const auto& p : level) specs.push_back(p.spec());
    layout.push_back(std::move(specs));
  }
  return enforce_nesting(hierarchy.domain, hierarchy.ratios, layout);
}

}  // namespace adjamr
