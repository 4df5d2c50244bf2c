#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace adjamr {

using Index2 = std::array<int, 2>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Physical extent of the computational domain. For 1D problems only the
/// x bounds are meaningful.
struct Domain {
  int dims = 1;
  double xlo = 0.0, xhi = 1.0;
  double ylo = 0.0, yhi = 1.0;

  bool contains(Point p, double tol = 1e-12) const;
};

/// Index-space description of one logically rectangular patch. Indices are
/// inclusive and live in the global index space of the patch's level.
struct PatchSpec {
  int level = 1;
  int dims = 1;
  Index2 lo{0, 0};
  Index2 hi{0, 0};
  double dx = 1.0;
  double dy = 1.0;
  Point origin{};
  int ghost_width = 2;

  int nx() const { return hi[0] - lo[0] + 1; }
  int ny() const { return hi[1] - lo[1] + 1; }
  int ghost_x() const { return ghost_width; }
  int ghost_y() const { return dims == 2 ? ghost_width : 0; }
  int total_x() const { return nx() + 2 * ghost_x(); }
  int total_y() const { return ny() + 2 * ghost_y(); }
  std::size_t interior_cells() const {
    return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny());
  }
  bool interior_contains(int i, int j) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1];
  }
  bool storage_contains(int i, int j) const {
    return i >= lo[0] - ghost_x() && i <= hi[0] + ghost_x() &&
           j >= lo[1] - ghost_y() && j <= hi[1] + ghost_y();
  }

  /// Throws OutOfRangeError when hi < lo, widths are not positive or the
  /// ghost width is below two.
  void validate() const;
};

/// Physical center of cell (i, j) in the spec's global index space.
Point cell_center(const PatchSpec& spec, int i, int j = 0);

/// Cell-averaged state on one patch, interior plus ghost cells, stored
/// cell-major with the m components of a cell contiguous.
class Patch {
 public:
  Patch() = default;
  Patch(PatchSpec spec, int m);

  const PatchSpec& spec() const { return spec_; }
  int m() const { return m_; }

  double time = 0.0;
  // State and time at the start of the most recent step, used for
  // linear-in-time interpolation onto finer levels.
  std::vector<double> previous;
  double previous_time = 0.0;

  std::size_t offset(int i, int j) const {
    const int li = i - spec_.lo[0] + spec_.ghost_x();
    const int lj = j - spec_.lo[1] + spec_.ghost_y();
    return (static_cast<std::size_t>(lj) * static_cast<std::size_t>(spec_.total_x()) +
            static_cast<std::size_t>(li)) *
           static_cast<std::size_t>(m_);
  }
  double& at(int i, int j, int k) { return state_[offset(i, j) + static_cast<std::size_t>(k)]; }
  double at(int i, int j, int k) const { return state_[offset(i, j) + static_cast<std::size_t>(k)]; }
  std::span<double> cell(int i, int j) {
    return {state_.data() + offset(i, j), static_cast<std::size_t>(m_)};
  }
  std::span<const double> cell(int i, int j) const {
    return {state_.data() + offset(i, j), static_cast<std::size_t>(m_)};
  }

  std::vector<double>& data() { return state_; }
  const std::vector<double>& data() const { return state_; }

  void save_previous() {
    previous = state_;
    previous_time = time;
  }
  bool all_finite() const;

 private:
  PatchSpec spec_{};
  int m_ = 0;
  std::vector<double> state_;
};

/// Nested levels of patches. levels[0] is the coarsest level (level 1);
/// ratios[n] refines level n into level n + 1 in both space and time.
struct PatchHierarchy {
  Domain domain{};
  std::vector<int> ratios;
  std::vector<std::vector<Patch>> levels;

  int num_levels() const { return static_cast<int>(levels.size()); }
};

/// Cell-centered values over one uniform grid covering the whole domain.
struct UniformField {
  PatchSpec spec{};  // ghost_width is ignored; values cover the interior only
  int m = 0;
  double time = 0.0;
  std::vector<double> values;

  UniformField() = default;
  UniformField(PatchSpec grid, int components, double t = 0.0);

  std::size_t index(int i, int j) const {
    return (static_cast<std::size_t>(j - spec.lo[1]) * static_cast<std::size_t>(spec.nx()) +
            static_cast<std::size_t>(i - spec.lo[0])) *
           static_cast<std::size_t>(m);
  }
  double& at(int i, int j, int k) { return values[index(i, j) + static_cast<std::size_t>(k)]; }
  double at(int i, int j, int k) const { return values[index(i, j) + static_cast<std::size_t>(k)]; }
};

/// Spec of a uniform grid of nx (by ny) cells covering `domain` at level 1.
PatchSpec uniform_grid(const Domain& domain, int nx, int ny = 1, int ghost_width = 2);

/// Bilinear interpolation of the four surrounding cell-center values. Points
/// between the domain edge and the outermost centers are clamped onto the
/// boundary row/column. Throws OutOfRangeError outside the domain.
std::vector<double> bilinear_interpolate(const UniformField& field, Point p);

/// Same rule into a caller-provided buffer of size field.m.
void bilinear_interpolate(const UniformField& field, Point p, std::span<double> out);

/// Bilinear interpolation from a patch using interior and ghost values.
/// The point must lie within the storage region's outermost centers or it is
/// clamped to them.
void interpolate_patch(const Patch& patch, std::span<const double> state, Point p,
                       std::span<double> out);

/// Linear interpolation weights along one axis: returns the lower index and
/// the weight of the upper neighbour after clamping to [first, last].
struct AxisStencil {
  int lower = 0;
  double weight = 0.0;
};
AxisStencil axis_stencil(double coord, double origin, double width, int first, int last);

struct NestingViolation {
  int level = 0;        // 1-based level of the offending fine patch
  int patch = 0;        // index of the patch within its level
  std::vector<Index2> cells;  // coarse cells missing from the parent union
};

/// Checks proper nesting with a one-cell coarse buffer (not required across
/// physical boundaries). Empty result means the hierarchy is properly nested.
std::vector<NestingViolation> enforce_nesting(const PatchHierarchy& hierarchy);

/// Layout-only variant used by the AMR driver before patches are allocated.
std::vector<NestingViolation> enforce_nesting(const Domain& domain,
                                              const std::vector<int>& ratios,
                                              const std::vector<std::vector<PatchSpec>>& levels);

/// Floor division for possibly negative indices.
inline int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace adjamr
