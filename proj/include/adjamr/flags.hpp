#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adjamr/geometry.hpp"

namespace adjamr {

/// Boolean refinement flag per cell of an index box (a patch interior or a
/// whole level).
struct FlagField {
  Index2 lo{0, 0};
  Index2 hi{0, 0};
  std::string strategy;
  double time = 0.0;
  std::vector<std::uint8_t> flags;

  FlagField() = default;
  FlagField(Index2 lo_, Index2 hi_);
  static FlagField for_patch(const PatchSpec& spec) { return FlagField(spec.lo, spec.hi); }

  int nx() const { return hi[0] - lo[0] + 1; }
  int ny() const { return hi[1] - lo[1] + 1; }
  bool contains(int i, int j) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1];
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j - lo[1]) * static_cast<std::size_t>(nx()) +
           static_cast<std::size_t>(i - lo[0]);
  }
  bool get(int i, int j) const { return flags[index(i, j)] != 0; }
  void set(int i, int j, bool v = true) { flags[index(i, j)] = v ? 1 : 0; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
};

/// Rectangle of cells produced by clustering, inclusive indices.
struct ClusterBox {
  Index2 lo{0, 0};
  Index2 hi{0, 0};
  std::size_t flagged = 0;

  std::size_t cells() const {
    return static_cast<std::size_t>(hi[0] - lo[0] + 1) *
           static_cast<std::size_t>(hi[1] - lo[1] + 1);
  }
  double efficiency() const {
    return static_cast<double>(flagged) / static_cast<double>(cells());
  }
  bool contains(int i, int j) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1];
  }
};

/// Dilates the flag set by `buffer_cells` in every direction, clipped to the
/// field's box. One-dimensional fields (a single row) dilate along x only.
FlagField buffer_flags(const FlagField& flags, int buffer_cells);

/// Berger-Rigoutsos clustering: recursive bisection of the bounding box at
/// signature holes, then at the strongest inflection of the signature
/// Laplacian, then at the midpoint of the longest side, until each box
/// reaches `efficiency_threshold` or is a single cell. A box that meets the
/// threshold is still split at a hole or inflection when the two shrunk
/// halves cover less than 90% of its cells.
std::vector<ClusterBox> cluster(const FlagField& flags, double efficiency_threshold);

}  // namespace adjamr
