#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adjamr/adjoint.hpp"
#include "adjamr/amr.hpp"
#include "adjamr/equations.hpp"
#include "adjamr/geometry.hpp"
#include "adjamr/io.hpp"
#include "adjamr/solver.hpp"

namespace adjamr {

struct InitialSpec {
  enum class Kind { Zero, Gaussian, CosineRing, PlaneWave, Table };
  Kind kind = Kind::Zero;
  double x = 0.0, y = 0.0;  // center
  double amplitude = 1.0;
  // Gaussian: amplitude * exp(-beta r^2); direction +1/-1 makes the pulse a
  // right/left-going eigenvector in x, 0 leaves the velocity at zero.
  double beta = 1.0;
  int direction = 0;
  // Cosine ring: amplitude * (offset + cos(pi (r - radius) / width)) where
  // |r - radius| <= support, zero elsewhere.
  double radius = 0.0, width = 1.0, offset = 1.0, support = -1.0;
  // Plane wave: amplitude * sin(2 pi (mx x / Lx + my y / Ly) - omega t)
  // times the right-going eigenvector; periodic domains only.
  int mode_x = 1, mode_y = 0;
  std::string file;  // table: snapshot file, resolved against the config
};

struct RunConfig {
  SystemKind system = SystemKind::Acoustics1D;
  Domain domain{};
  Index2 cells{1, 1};
  double t0 = 0.0;
  double t_final = 0.0;
  std::vector<double> output_times;
  double courant = 0.9;
  LimiterKind limiter = LimiterKind::MC;

  // Acoustics material.
  double bulk = 1.0, density = 1.0;
  std::vector<AcousticLayer> layers;
  // Shallow water bathymetry.
  double base = -1.0, sea_level = 0.0, gravity = 9.81;
  std::vector<BathymetryRamp> ramps;
  std::vector<BathymetryIsland> islands;

  BoundarySpec boundary{};
  InitialSpec initial{};

  int max_levels = 1;
  std::vector<int> ratios;
  int regrid_interval = 2;
  int buffer_cells = 2;
  double efficiency = 0.7;
  int max_patch_cells = 60;
  std::vector<RefinementRegion> regions;

  StrategyKind strategy = StrategyKind::Difference;
  double difference_tolerance = 0.1;
  double surface_tolerance = 0.1;
  double adjoint_tolerance = 0.02;

  bool has_functional = false;
  FunctionalSpec functional{};
  TimeWindow window{};
  int snapshot_intervals = 64;
  Index2 adjoint_cells{0, 0};  // zero: the forward coarse resolution

  std::vector<Gauge> gauges;

  MaterialModel material() const;
  EquationSet forward() const;
  /// AMR options for a strategy, using that strategy's tolerance.
  AmrOptions amr_options(StrategyKind kind) const;
  /// Uniform grid of the adjoint solve.
  PatchSpec adjoint_grid() const;
  /// Initial state evaluated at a point.
  InitialState initial_state() const;
};

/// Parses key = value lines grouped in [sections]; '#' starts a comment.
/// Unknown sections or keys, malformed numbers, missing required keys and
/// out-of-domain locations raise ParseError naming the offending line.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; relative table paths resolve against its folder.
RunConfig load_config(const std::filesystem::path& path);

/// Exact state of a plane-wave configuration at time t, averaged over the
/// cell of size dx by dy centred at p. Throws UnsupportedConfigError for
/// other initial conditions or non-uniform material.
void plane_wave_average(const RunConfig& cfg, Point p, double dx, double dy, double t,
                        std::span<double> out);

}  // namespace adjamr
