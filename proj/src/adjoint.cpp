#include <algorithm>
#include <cmath>
#include <limits>

#include "adjamr/adjoint.hpp"
#include "adjamr/errors.hpp"

namespace adjamr {

bool FunctionalSpec::inside(Point p, int dims) const {
  if (shape == Shape::Disk) {
    const double dx = p.x - cx;
    const double dy = dims == 2 ? p.y - cy : 0.0;
    return dx * dx + dy * dy <= radius * radius;
  }
  if (p.x < xlo || p.x > xhi) return false;
  return dims == 1 || (p.y >= ylo && p.y <= yhi);
}

UniformField build_phi(const FunctionalSpec& functional, const EquationSet& forward,
                       const PatchSpec& grid, const Domain& domain) {
  const int m = forward.m();
  if (static_cast<int>(functional.weights.size()) != m) {
    throw ConfigError("functional needs one weight per component");
  }
  for (double w : functional.weights) {
    if (!std::isfinite(w)) throw ConfigError("functional weights must be finite");
  }
  PatchSpec g = grid;
  UniformField phi(g, m);
  std::size_t inside = 0;
  for (int j = g.lo[1]; j <= g.hi[1]; ++j) {
    for (int i = g.lo[0]; i <= g.hi[0]; ++i) {
      const Point c = cell_center(g, i, j);
      if (!domain.contains(c) || !functional.inside(c, g.dims)) continue;
      ++inside;
      if (forward.shallow_water() && !forward.material.at(c).wet) continue;
      for (int k = 0; k < m; ++k) phi.at(i, j, k) = functional.weights[static_cast<std::size_t>(k)];
    }
  }
  if (inside == 0) throw ConfigError("functional region contains no cell of the grid");
  return phi;
}

AdjointSnapshotStore solve_adjoint(const EquationSet& forward, const Domain& domain,
                                   const BoundarySpec& bc, const PatchSpec& grid,
                                   const FunctionalSpec& functional, double t0,
                                   double t_final, int intervals, double courant_target,
                                   LimiterKind limiter) {
  if (t_final < t0) throw ConfigError("adjoint final time precedes the start time");
  if (intervals < 1) throw ConfigError("snapshot interval count must be positive");
  AdjointSnapshotStore store;
  store.equations = EquationSet::adjoint(forward.kind, forward.material, true);
  store.domain = domain;
  store.grid = grid;
  store.t0 = t0;
  store.t_final = t_final;
  const int n_snap = t_final > t0 ? intervals : 0;
  store.interval = n_snap > 0 ? (t_final - t0) / n_snap : 0.0;

  Patch patch(grid, store.equations.m());
  const CoeffField coeffs = build_coeffs(store.equations, grid, domain, bc);
  const UniformField phi = build_phi(functional, forward, grid, domain);
  const int m = store.equations.m();
  for (int j = grid.lo[1]; j <= grid.hi[1]; ++j) {
    for (int i = grid.lo[0]; i <= grid.hi[0]; ++i) {
      for (int k = 0; k < m; ++k) patch.at(i, j, k) = phi.at(i, j, k);
    }
  }
  store.wet.resize(grid.interior_cells());
  for (int j = grid.lo[1]; j <= grid.hi[1]; ++j) {
    for (int i = grid.lo[0]; i <= grid.hi[0]; ++i) {
      store.wet[phi.index(i, j) / static_cast<std::size_t>(m)] = coeffs.at(i, j).wet ? 1 : 0;
    }
  }

  auto capture = [&](double label) {
    UniformField f(grid, m, label);
    for (int j = grid.lo[1]; j <= grid.hi[1]; ++j) {
      for (int i = grid.lo[0]; i <= grid.hi[0]; ++i) {
        for (int k = 0; k < m; ++k) f.at(i, j, k) = patch.at(i, j, k);
      }
    }
    return f;
  };

  std::vector<UniformField> reversed;
  reversed.push_back(capture(t_final));
  if (n_snap > 0) {
    const double dt_cfl = select_dt(coeffs, courant_target, std::numeric_limits<double>::infinity());
    const int sub = std::isfinite(dt_cfl)
                        ? std::max(1, static_cast<int>(std::ceil(store.interval / dt_cfl - 1e-12)))
                        : 1;
    const double dt = store.interval / sub;
    for (int s = 1; s <= n_snap; ++s) {
      for (int k = 0; k < sub; ++k) {
        fill_ghost_physical(patch, domain, bc, store.equations);
        step_patch(patch, coeffs, dt, store.equations, limiter);
      }
      reversed.push_back(capture(t0 + (n_snap - s) * store.interval));
    }
  }
  store.snapshots.assign(std::make_move_iterator(reversed.rbegin()),
                         std::make_move_iterator(reversed.rend()));
  return store;
}

namespace {

Index2 containing_cell(const PatchSpec& g, Point p) {
  int i = static_cast<int>(std::floor((p.x - g.origin.x) / g.dx));
  int j = g.dims == 2 ? static_cast<int>(std::floor((p.y - g.origin.y) / g.dy)) : 0;
  i = std::clamp(i, g.lo[0], g.hi[0]);
  j = std::clamp(j, g.lo[1], g.hi[1]);
  return {i, j};
}

}  // namespace

bool AdjointSnapshotStore::wet_at(Point p) const {
  if (wet.empty()) return true;
  const Index2 c = containing_cell(grid, p);
  return wet[static_cast<std::size_t>(c[1] - grid.lo[1]) * static_cast<std::size_t>(grid.nx()) +
             static_cast<std::size_t>(c[0] - grid.lo[0])] != 0;
}

void AdjointSnapshotStore::sample(std::size_t k, Point p, std::span<double> out) const {
  if (!wet_at(p)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  bilinear_interpolate(snapshots.at(k), p, out);
}

void AdjointSnapshotStore::sample_at_time(double t, Point p, std::span<double> out) const {
  if (snapshots.empty()) throw ConfigError("empty adjoint snapshot store");
  if (snapshots.size() == 1 || t <= snapshots.front().time) {
    sample(0, p, out);
    return;
  }
  if (t >= snapshots.back().time) {
    sample(snapshots.size() - 1, p, out);
    return;
  }
  std::size_t k = static_cast<std::size_t>((t - t0) / interval);
  k = std::min(k, snapshots.size() - 2);
  while (k > 0 && snapshots[k].time > t) --k;
  while (k + 2 < snapshots.size() && snapshots[k + 1].time < t) ++k;
  const double w = (t - snapshots[k].time) / (snapshots[k + 1].time - snapshots[k].time);
  std::vector<double> a(out.size()), b(out.size());
  sample(k, p, a);
  sample(k + 1, p, b);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = (1.0 - w) * a[c] + w * b[c];
}

std::vector<std::size_t> query_window_times(double t, const TimeWindow& window,
                                            const AdjointSnapshotStore& store) {
  std::vector<std::size_t> out;
  const std::size_t n = store.size();
  const double scale = std::max({1.0, std::abs(window.t_final), std::abs(store.interval)});
  const double tol = 1e-9 * scale;
  if (n == 0 || t > window.t_final + tol) return out;
  const double upper = std::min(t + window.t_final - window.t_start, window.t_final);
  bool lower_aligned = false;
  bool upper_aligned = false;
  std::size_t below = n, above = n;
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = store.time_of(k);
    if (std::abs(tau - t) <= tol) lower_aligned = true;
    if (std::abs(tau - upper) <= tol) upper_aligned = true;
    if (tau < t - tol) below = k;
    if (tau > upper + tol && above == n) above = k;
    if (tau >= t - tol && tau <= upper + tol) out.push_back(k);
  }
  if (!lower_aligned && below != n) out.insert(out.begin(), below);
  if (!upper_aligned && above != n) out.push_back(above);
  return out;
}

double evaluate_J(const UniformField& q, const UniformField& q_hat) {
  if (q.values.size() != q_hat.values.size()) {
    throw OutOfRangeError("fields differ in size");
  }
  const double area = q.spec.dims == 2 ? q.spec.dx * q.spec.dy : q.spec.dx;
  double sum = 0.0;
  for (std::size_t k = 0; k < q.values.size(); ++k) sum += q.values[k] * q_hat.values[k];
  return sum * area;
}

double evaluate_J(const PatchHierarchy& hierarchy, const AdjointSnapshotStore& store, double t) {
  double total = 0.0;
  std::vector<double> qh(static_cast<std::size_t>(store.equations.m()));
  for (int l = 0; l < hierarchy.num_levels(); ++l) {
    const std::vector<Patch>* finer =
        l + 1 < hierarchy.num_levels() ? &hierarchy.levels[static_cast<std::size_t>(l + 1)] : nullptr;
    const int r = finer != nullptr ? hierarchy.ratios[static_cast<std::size_t>(l)] : 1;
    for (const Patch& p : hierarchy.levels[static_cast<std::size_t>(l)]) {
      const PatchSpec& s = p.spec();
      const int ry = s.dims == 2 ? r : 1;
      const double area = s.dims == 2 ? s.dx * s.dy : s.dx;
      for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
        for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
          bool covered = false;
          if (finer != nullptr) {
            for (const Patch& f : *finer) {
              if (f.spec().interior_contains(i * r, j * ry)) {
                covered = true;
                break;
              }
            }
          }
          if (covered) continue;
          store.sample_at_time(t, cell_center(s, i, j), qh);
          double dot = 0.0;
          for (int k = 0; k < p.m(); ++k) dot += qh[static_cast<std::size_t>(k)] * p.at(i, j, k);
          total += dot * area;
        }
      }
    }
  }
  return total;
}

}  // namespace adjamr
