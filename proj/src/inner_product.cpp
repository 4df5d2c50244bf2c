#include <algorithm>
#include <cmath>

#include "adjamr/adjoint.hpp"
#include "adjamr/errors.hpp"

namespace adjamr {

std::vector<double> inner_product_field(const Patch& patch, const CoeffField* coeffs, double t,
                                        const AdjointSnapshotStore& store,
                                        const TimeWindow& window) {
  const PatchSpec& s = patch.spec();
  const int m = patch.m();
  const int nx = s.nx();
  std::vector<double> out(s.interior_cells(), 0.0);
  const std::vector<std::size_t> ids = query_window_times(t, window, store);
  if (ids.empty()) return out;
#pragma omp parallel
  {
    std::vector<double> qh(static_cast<std::size_t>(store.equations.m()));
#pragma omp for schedule(static)
    for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
      for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
        if (coeffs != nullptr && !coeffs->at(i, j).wet) continue;
        const Point c = cell_center(s, i, j);
        if (!store.wet_at(c)) continue;
        double best = 0.0;
        for (std::size_t k : ids) {
          bilinear_interpolate(store.snapshots[k], c, qh);
          double dot = 0.0;
          for (int e = 0; e < m; ++e) dot += qh[static_cast<std::size_t>(e)] * patch.at(i, j, e);
          best = std::max(best, std::abs(dot));
        }
        out[static_cast<std::size_t>(j - s.lo[1]) * static_cast<std::size_t>(nx) +
            static_cast<std::size_t>(i - s.lo[0])] = best;
      }
    }
  }
  return out;
}

FlagField inner_product_flags(const Patch& patch, const CoeffField* coeffs, double t,
                              const AdjointSnapshotStore& store, const TimeWindow& window,
                              double tolerance) {
  if (store.snapshots.empty()) throw ConfigError("adjoint snapshot store is empty");
  const std::vector<double> v = inner_product_field(patch, coeffs, t, store, window);
  FlagField f = FlagField::for_patch(patch.spec());
  f.strategy = "adjoint";
  f.time = t;
  for (std::size_t k = 0; k < v.size(); ++k) f.flags[k] = v[k] > tolerance ? 1 : 0;
  return f;
}

namespace reference {

std::vector<double> inner_product_field(const Patch& patch, const CoeffField* coeffs, double t,
                                        const AdjointSnapshotStore& store,
                                        const TimeWindow& window) {
  const PatchSpec& s = patch.spec();
  std::vector<double> out(s.interior_cells(), 0.0);
  for (std::size_t k : query_window_times(t, window, store)) {
    std::size_t cell = 0;
    for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
      for (int i = s.lo[0]; i <= s.hi[0]; ++i, ++cell) {
        const Point c = cell_center(s, i, j);
        if ((coeffs != nullptr && !coeffs->at(i, j).wet) || !store.wet_at(c)) continue;
        const std::vector<double> qh = bilinear_interpolate(store.snapshots[k], c);
        double dot = 0.0;
        for (int e = 0; e < patch.m(); ++e) dot += qh[static_cast<std::size_t>(e)] * patch.at(i, j, e);
        out[cell] = std::max(out[cell], std::abs(dot));
      }
    }
  }
  return out;
}

}  // namespace reference

}  // namespace adjamr
