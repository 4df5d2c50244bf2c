#pragma once

#include <array>
#include <string>
#include <vector>

#include "adjamr/equations.hpp"
#include "adjamr/geometry.hpp"

namespace adjamr {

enum class BoundaryCondition { Wall, Outflow, Periodic };
enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

std::string to_string(BoundaryCondition bc);
BoundaryCondition boundary_from_string(const std::string& name);

/// One condition per physical side. Wet/dry interfaces of shallow water
/// problems always act as walls.
struct BoundarySpec {
  std::array<BoundaryCondition, 4> sides{BoundaryCondition::Wall, BoundaryCondition::Wall,
                                         BoundaryCondition::Wall, BoundaryCondition::Wall};

  BoundaryCondition operator[](Side s) const { return sides[static_cast<int>(s)]; }
  static BoundarySpec all(BoundaryCondition bc) { return {{bc, bc, bc, bc}}; }
};

enum class LimiterKind { None, Minmod, MC, Superbee };

std::string to_string(LimiterKind l);
LimiterKind limiter_from_string(const std::string& name);

/// Limiter function phi(theta).
double limiter_phi(LimiterKind kind, double theta);

/// Per-cell block coefficients over the storage region of one patch.
struct CoeffField {
  PatchSpec spec{};
  std::vector<CellCoeffs> cells;

  const CellCoeffs& at(int i, int j) const {
    const int li = i - spec.lo[0] + spec.ghost_x();
    const int lj = j - spec.lo[1] + spec.ghost_y();
    return cells[static_cast<std::size_t>(lj) * static_cast<std::size_t>(spec.total_x()) +
                 static_cast<std::size_t>(li)];
  }
  bool any_dry() const;
};

/// Evaluates the material at cell centers. Ghost cells outside the domain
/// take the material of the cell they mirror (wall), wrap to (periodic) or
/// extrapolate from (outflow).
CoeffField build_coeffs(const EquationSet& eq, const PatchSpec& spec, const Domain& domain,
                        const BoundarySpec& bc);

/// Fills ghost cells that lie outside the physical domain. Wall: mirror with
/// the normal velocity negated; outflow: copy of the nearest interior cell;
/// periodic: wrap (patch must span the domain in that direction).
void fill_ghost_physical(Patch& patch, const Domain& domain, const BoundarySpec& bc,
                         const EquationSet& eq);

struct StepResult {
  double max_courant = 0.0;
};

/// Largest |speed| dt / dx over the interfaces the step will touch.
double max_courant(const PatchSpec& spec, const CoeffField& coeffs, double dt);

/// One wave-propagation step (first-order fluctuations, limited second-order
/// corrections, transverse corrections in 2D). Ghost cells must be valid.
/// Throws CflViolationError before touching the state when the Courant
/// number exceeds one, and NumericalBlowupError on non-finite results.
/// Rows of the patch are processed in parallel with OpenMP.
StepResult step_patch(Patch& patch, const CoeffField& coeffs, double dt, const EquationSet& eq,
                      LimiterKind limiter);

namespace reference {

/// Serial implementation of the same update with straightforward global
/// flux accumulation. Kept as the test oracle for the parallel kernel.
StepResult step_patch(Patch& patch, const CoeffField& coeffs, double dt, const EquationSet& eq,
                      LimiterKind limiter);

}  // namespace reference

/// Coarse time step: courant_target * min(dx, dy) / max wave speed, or
/// dt_max when nothing moves.
double select_dt(const CoeffField& coarse, double courant_target, double dt_max);

}  // namespace adjamr
