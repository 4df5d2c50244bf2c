#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adjamr/adjoint.hpp"
#include "adjamr/geometry.hpp"

namespace adjamr {

struct Gauge {
  int id = 0;
  Point location{};
};

struct GaugeSample {
  double time = 0.0;
  std::vector<double> q;
};

struct GaugeSeries {
  Gauge gauge{};
  std::vector<GaugeSample> samples;
};

struct RegridRecord {
  int level = 0;  // 1-based level that was rebuilt
  double time = 0.0;
  std::size_t flagged = 0;
  std::size_t patches = 0;
};

/// Wall-clock seconds by phase, cell-steps per level and flag counts.
struct TimingReport {
  std::map<std::string, double> seconds;
  std::vector<std::size_t> cell_steps;  // index 0 is level 1
  std::vector<RegridRecord> regrids;

  std::size_t total_cell_steps() const;
  std::size_t total_flagged() const;
};

/// Writes every patch of the hierarchy: a header block per patch followed by
/// one line of 17-significant-digit values per interior cell.
void write_snapshot(const PatchHierarchy& hierarchy, const std::filesystem::path& path);
void write_snapshot(const UniformField& field, const std::filesystem::path& path);

/// Reads a snapshot back. Throws FormatError (with a byte offset) when the
/// file is malformed. Ghost cells of the returned patches are zero.
PatchHierarchy read_snapshot(const std::filesystem::path& path);
UniformField read_uniform_snapshot(const std::filesystem::path& path);

/// Persists the store as a directory: store.txt, wet.txt and one snapshot
/// file per label.
void write_store(const AdjointSnapshotStore& store, const std::filesystem::path& dir);
AdjointSnapshotStore read_store(const std::filesystem::path& dir, const EquationSet& equations);

/// Bilinear sample of the finest patch whose interior contains p (lowest
/// patch index on ties), appended to the series.
void record_gauge(const PatchHierarchy& hierarchy, GaugeSeries& series, double t);
/// Level and patch index used by record_gauge, or {-1, -1}.
std::pair<int, int> finest_covering_patch(const PatchHierarchy& hierarchy, Point p);

void write_gauge(const GaugeSeries& series, const std::filesystem::path& path);
GaugeSeries read_gauge(const std::filesystem::path& path);

struct GaugeComparison {
  std::vector<double> max_abs;
  std::vector<double> rms;
};

/// Resamples the finer series onto the coarser series' times (linear in
/// time) over the overlapping range and returns per-component differences.
/// Throws ComparisonError when the ranges do not overlap.
GaugeComparison compare_gauges(const GaugeSeries& a, const GaugeSeries& b);

/// key = value text: seconds.<phase>, cell_steps.level<n>, cell_steps.total,
/// regrid.<k> = level time flagged patches, flagged.total.
void write_timing(const TimingReport& report, const std::filesystem::path& path);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace adjamr
