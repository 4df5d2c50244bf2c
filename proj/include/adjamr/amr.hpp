#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "adjamr/adjoint.hpp"
#include "adjamr/equations.hpp"
#include "adjamr/flags.hpp"
#include "adjamr/geometry.hpp"
#include "adjamr/io.hpp"
#include "adjamr/solver.hpp"

namespace adjamr {

/// Space-time rectangle that caps (max_level) or forces (min_level)
/// refinement. Levels are 1-based.
struct RefinementRegion {
  double xlo = -1e300, xhi = 1e300, ylo = -1e300, yhi = 1e300;
  double t_start = -1e300, t_end = 1e300;
  int min_level = 1;
  int max_level = 1000;

  bool contains(Point p, double t, int dims) const;
};

enum class StrategyKind { Difference, Surface, Adjoint, Everywhere };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);

struct FlaggingStrategy {
  StrategyKind kind = StrategyKind::Difference;
  double tolerance = 0.1;
};

/// Data a strategy may need besides the patch state.
struct FlagContext {
  const EquationSet* equations = nullptr;
  const CoeffField* coeffs = nullptr;  // wet mask; may be null for acoustics
  double time = 0.0;
  int level = 1;  // 1-based level of the flagged patch
  const AdjointSnapshotStore* store = nullptr;
  TimeWindow window{};
  std::span<const RefinementRegion> regions{};
};

/// Evaluates the strategy on the patch interior, then applies refinement
/// regions: flags are cleared where level + 1 exceeds a region's max_level
/// and set where level + 1 is at most its min_level.
/// Throws ConfigError for the adjoint strategy without a store.
FlagField flag_cells(const Patch& patch, const FlaggingStrategy& strategy,
                     const FlagContext& context);

struct AmrOptions {
  int max_levels = 1;
  std::vector<int> ratios;  // ratios[n] refines level n+1 into n+2
  int regrid_interval = 2;
  int buffer_cells = 2;
  double efficiency = 0.7;
  int max_patch_cells = 60;  // longest fine patch edge
  double courant_target = 0.9;
  LimiterKind limiter = LimiterKind::MC;
  FlaggingStrategy strategy{};
  std::vector<RefinementRegion> regions;
};

using InitialState = std::function<void(Point, std::span<double>)>;

/// Recursive subcycling driver over a patch hierarchy whose coarsest level is
/// one patch covering the domain.
class AmrSolver {
 public:
  AmrSolver(EquationSet equations, Domain domain, Index2 coarse_cells, BoundarySpec bc,
            AmrOptions options);

  /// Fills level 1 from the initial state and builds finer levels by
  /// flagging and clustering, filling new patches from the initial state.
  void initialize(const InitialState& initial, double t0);

  /// Adjoint data for the adjoint strategy; the store must outlive the run.
  void set_adjoint(const AdjointSnapshotStore* store, TimeWindow window);
  void add_gauge(const Gauge& gauge);

  /// Coarse steps of the stable size until t_end, landing exactly on it.
  void advance_to(double t_end);
  /// One coarse step of dt including all finer subcycles. If the Courant
  /// number on any level exceeds one, dt is halved once; a second failure
  /// throws CflViolationError. Returns the dt actually taken.
  double coarse_step(double dt);
  /// Largest stable coarse step for the configured Courant target.
  double stable_dt() const { return stable_dt_; }
  double time() const { return hierarchy_.levels[0][0].time; }

  /// Advances level (1-based) by dt: regrid the next level when due, fill
  /// ghosts, step every patch, then subcycle the next level and restrict.
  void advance_level(int level, double dt);
  /// Rebuilds `level` (1-based, >= 2) from flags on level - 1 and, to keep
  /// nesting, rebuilds every finer level as well.
  void regrid(int level);
  /// Replaces coarse cells covered by level + 1 with the mean of their children.
  void restrict_fine_to_coarse(int level);
  /// Fills ghost cells of every patch of `level` at time t: coarse space-time
  /// interpolation, then same-level copies, then physical conditions.
  void fill_ghosts(int level, double t);

  const PatchHierarchy& hierarchy() const { return hierarchy_; }
  PatchHierarchy& hierarchy() { return hierarchy_; }
  const TimingReport& timing() const { return timing_; }
  TimingReport& timing() { return timing_; }
  const std::vector<GaugeSeries>& gauges() const { return gauges_; }
  const EquationSet& equations() const { return eq_; }
  const CoeffField& coeffs(int level, int patch) const;
  /// Flags produced at the most recent regrid of each level (1-based index
  /// of the flagged level, i.e. the parent).
  const std::vector<FlagField>& last_flags() const { return last_flags_; }
  /// Called after every regrid with the level-wide flags of the parent level.
  std::function<void(int level, const FlagField& flags)> on_regrid;

 private:
  PatchSpec spec_for(int level_index, Index2 lo, Index2 hi) const;
  FlagField level_flags(int level_index, double t);
  std::vector<PatchSpec> boxes_to_patches(int fine_index, const std::vector<ClusterBox>& boxes) const;
  void rebuild_level(int fine_index, bool from_initial);
  void fill_from_coarse(int level_index, Patch& patch, double t, bool ghosts_only);
  void copy_same_level(int level_index, Patch& patch, std::size_t self);
  void record_gauges(int level_index, double t);
  double check_courant(double dt) const;

  EquationSet eq_;
  Domain domain_;
  Index2 coarse_cells_;
  BoundarySpec bc_;
  AmrOptions opts_;
  PatchHierarchy hierarchy_;
  std::vector<std::vector<CoeffField>> coeffs_;
  std::vector<int> steps_since_regrid_;
  std::vector<FlagField> last_flags_;
  std::vector<GaugeSeries> gauges_;
  TimingReport timing_;
  const AdjointSnapshotStore* store_ = nullptr;
  TimeWindow window_{};
  InitialState initial_;
  double stable_dt_ = 0.0;
};

}  // namespace adjamr
