#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adjamr/amr.hpp"
#include "adjamr/config.hpp"

namespace adjamr {

/// Runs the adjoint pass of a configuration with a functional.
AdjointSnapshotStore run_adjoint(const RunConfig& cfg);

struct ForwardOptions {
  StrategyKind strategy = StrategyKind::Difference;
  const AdjointSnapshotStore* store = nullptr;
  /// Output directory for snapshots/, gauges/ and timing.txt; empty: none.
  std::filesystem::path out;
  /// Called at t0 and at every output time.
  std::function<void(const AmrSolver&, double)> on_output;
  /// Called after every regrid with the parent level and its flags.
  std::function<void(const AmrSolver&, int, const FlagField&)> on_regrid;
};

struct ForwardRun {
  TimingReport timing;
  std::vector<GaugeSeries> gauges;
  PatchHierarchy final_state;
};

/// Forward AMR run from t0 to t_final, stopping exactly at output times.
ForwardRun run_forward(const RunConfig& cfg, const ForwardOptions& options);

struct CompareRow {
  std::string strategy;
  double seconds = 0.0;
  std::size_t cell_steps = 0;
  std::size_t finest_cell_steps = 0;  // cell-steps on levels 2 and above
  std::size_t flagged = 0;
  std::vector<double> gauge_max_abs;  // against the first strategy, all gauges
  std::vector<double> gauge_rms;
};

/// Runs each strategy, sharing one adjoint pass, and writes compare.txt.
std::vector<CompareRow> run_compare(const RunConfig& cfg, const std::vector<StrategyKind>& strategies,
                                    const std::filesystem::path& out);

struct ConvergenceRow {
  int nx = 0;
  int ny = 0;
  double l1_error = 0.0;
  double order = 0.0;  // against the previous row; 0 for the first
};

/// Uniform runs at k resolutions, each twice the previous, against the
/// analytic plane-wave solution. Throws UnsupportedConfigError otherwise.
std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg, int levels,
                                            const std::filesystem::path& out);

/// x-t masks of a 1D run on the coarse grid, one row per adjoint snapshot
/// time: 1-norm of q, 1-norm of q_hat, windowed |q_hat^T q|.
struct XtMaps {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<std::vector<double>> q_norm;
  std::vector<std::vector<double>> adjoint_norm;
  std::vector<std::vector<double>> inner;
};

XtMaps compute_xt_maps(const RunConfig& cfg, const AdjointSnapshotStore& store);
/// Writes xt_q.txt, xt_adjoint.txt and xt_inner.txt thresholded at v.
void write_xt_maps(const XtMaps& maps, double threshold, const std::filesystem::path& out);

/// Command entry points used by the executable. They return the exit code
/// and print diagnostics to `err`.
int cmd_run_adjoint(const std::filesystem::path& config, const std::filesystem::path& out,
                    std::ostream& log, std::ostream& err);
int cmd_run_forward(const std::filesystem::path& config, const std::filesystem::path& out,
                    const std::string& strategy, const std::filesystem::path& adjoint_dir,
                    std::ostream& log, std::ostream& err);
int cmd_compare(const std::filesystem::path& config, const std::filesystem::path& out,
                const std::vector<std::string>& strategies, std::ostream& log, std::ostream& err);
int cmd_convergence(const std::filesystem::path& config, const std::filesystem::path& out,
                    int levels, std::ostream& log, std::ostream& err);
int cmd_xt_map(const std::filesystem::path& config, const std::filesystem::path& out,
               double threshold, std::ostream& log, std::ostream& err);

}  // namespace adjamr
