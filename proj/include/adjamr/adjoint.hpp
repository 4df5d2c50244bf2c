#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adjamr/equations.hpp"
#include "adjamr/flags.hpp"
#include "adjamr/geometry.hpp"
#include "adjamr/solver.hpp"

namespace adjamr {

/// Region of interest of the functional J. Components carry a weight inside
/// the shape and zero outside.
struct FunctionalSpec {
  enum class Shape { Box, Disk };
  Shape shape = Shape::Box;
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;  // box, closed
  double cx = 0.0, cy = 0.0, radius = 0.0;            // disk, r <= radius
  std::vector<double> weights;                        // one per component

  bool inside(Point p, int dims) const;
};

/// Forward-time interval [t_start, t_final] over which J matters.
struct TimeWindow {
  double t_start = 0.0;
  double t_final = 0.0;
};

/// Adjoint fields on one uniform grid, labelled with forward times in
/// increasing order: snapshots[k] holds the adjoint at t0 + k * interval.
struct AdjointSnapshotStore {
  EquationSet equations;
  Domain domain{};
  PatchSpec grid{};
  double t0 = 0.0;
  double t_final = 0.0;
  double interval = 0.0;
  std::vector<UniformField> snapshots;
  std::vector<std::uint8_t> wet;  // per grid cell, 1 when wet

  std::size_t size() const { return snapshots.size(); }
  double time_of(std::size_t k) const { return snapshots[k].time; }
  /// True when the adjoint cell containing p is wet.
  bool wet_at(Point p) const;
  /// Bilinear interpolation of snapshot k at p; zero at dry locations.
  void sample(std::size_t k, Point p, std::span<double> out) const;
  /// Adjoint at forward time t, linear between the bracketing snapshots.
  void sample_at_time(double t, Point p, std::span<double> out) const;
};

/// Cell-center indicator of the functional times its weights; dry cells
/// (shallow water) are zero. Throws ConfigError when no cell center of the
/// grid lies inside the shape.
UniformField build_phi(const FunctionalSpec& functional, const EquationSet& forward,
                       const PatchSpec& grid, const Domain& domain);

/// Solves the time-reversed transpose problem from phi with the f-wave
/// solver, saving snapshots at uniform intervals and relabelling them with
/// forward times.
AdjointSnapshotStore solve_adjoint(const EquationSet& forward, const Domain& domain,
                                   const BoundarySpec& bc, const PatchSpec& grid,
                                   const FunctionalSpec& functional, double t0,
                                   double t_final, int intervals, double courant_target,
                                   LimiterKind limiter);

/// Snapshot indices relevant at forward time t: all labels in
/// [t, min(t + t_f - t_s, t_f)], plus the nearest label below t and the
/// nearest above the upper end when those ends fall between labels.
std::vector<std::size_t> query_window_times(double t, const TimeWindow& window,
                                            const AdjointSnapshotStore& store);

/// Windowed max of |q_hat^T q| at every interior cell of the patch, stored
/// row-major over the interior. Cells that are dry in `coeffs` or whose
/// center falls in a dry adjoint cell get zero. Parallel over rows.
std::vector<double> inner_product_field(const Patch& patch, const CoeffField* coeffs, double t,
                                        const AdjointSnapshotStore& store,
                                        const TimeWindow& window);

/// Thresholded inner product field (strictly greater than tolerance).
FlagField inner_product_flags(const Patch& patch, const CoeffField* coeffs, double t,
                              const AdjointSnapshotStore& store, const TimeWindow& window,
                              double tolerance);

namespace reference {

/// Serial cell-by-cell evaluation of inner_product_field.
std::vector<double> inner_product_field(const Patch& patch, const CoeffField* coeffs, double t,
                                        const AdjointSnapshotStore& store,
                                        const TimeWindow& window);

}  // namespace reference

/// Sum over cells of q_hat^T q times cell area.
double evaluate_J(const UniformField& q, const UniformField& q_hat);

/// Sum over the finest cells of the hierarchy with q_hat taken from the
/// store at time t (interpolated in space and time).
double evaluate_J(const PatchHierarchy& hierarchy, const AdjointSnapshotStore& store, double t);

}  // namespace adjamr
