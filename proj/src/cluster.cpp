#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "adjamr/errors.hpp"
#include "adjamr/flags.hpp"

namespace adjamr {

namespace {

constexpr double kCombineEfficiency = 0.9;

struct Split {
  int axis = -1;
  int last = 0;  // last index (absolute) kept in the lower half
};

std::vector<int> signature(const FlagField& f, const ClusterBox& b, int axis) {
  const int n = b.hi[axis] - b.lo[axis] + 1;
  std::vector<int> sig(static_cast<std::size_t>(n), 0);
  for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
    for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
      if (f.get(i, j)) ++sig[static_cast<std::size_t>(axis == 0 ? i - b.lo[0] : j - b.lo[1])];
    }
  }
  return sig;
}

// Bounding box of the flags inside `b`; flagged == 0 when there are none.
ClusterBox shrink(const FlagField& f, const ClusterBox& b) {
  ClusterBox out{{b.hi[0], b.hi[1]}, {b.lo[0], b.lo[1]}, 0};
  for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
    for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
      if (!f.get(i, j)) continue;
      ++out.flagged;
      out.lo = {std::min(out.lo[0], i), std::min(out.lo[1], j)};
      out.hi = {std::max(out.hi[0], i), std::max(out.hi[1], j)};
    }
  }
  return out;
}

Split find_split(const FlagField& f, const ClusterBox& b, bool bisect = true) {
  std::vector<int> sig[2] = {signature(f, b, 0), signature(f, b, 1)};
  const int len[2] = {b.hi[0] - b.lo[0] + 1, b.hi[1] - b.lo[1] + 1};
  const int order[2] = {len[0] >= len[1] ? 0 : 1, len[0] >= len[1] ? 1 : 0};

  // Holes: a zero signature entry, the one nearest the middle.
  for (int axis : order) {
    int best = -1;
    double best_dist = 1e300;
    for (int k = 1; k + 1 < len[axis]; ++k) {
      if (sig[axis][static_cast<std::size_t>(k)] != 0) continue;
      const double d = std::abs(k - 0.5 * (len[axis] - 1));
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (best >= 0) return {axis, b.lo[axis] + best};
  }

  // Inflection: sign change of the second difference with the largest jump.
  Split split;
  int best_jump = 0;
  double best_dist = 1e300;
  for (int axis : order) {
    const std::vector<int>& s = sig[axis];
    const int n = len[axis];
    if (n < 4) continue;
    std::vector<int> lap(static_cast<std::size_t>(n), 0);
    for (int k = 1; k + 1 < n; ++k) {
      lap[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k + 1)] -
                                          2 * s[static_cast<std::size_t>(k)] +
                                          s[static_cast<std::size_t>(k - 1)];
    }
    for (int k = 1; k + 2 < n; ++k) {
      const int a = lap[static_cast<std::size_t>(k)];
      const int c = lap[static_cast<std::size_t>(k + 1)];
      if ((a < 0 && c > 0) || (a > 0 && c < 0)) {
        const int jump = std::abs(c - a);
        const double d = std::abs(k + 0.5 - 0.5 * (n - 1));
        if (jump > best_jump || (jump == best_jump && d < best_dist)) {
          best_jump = jump;
          best_dist = d;
          split = {axis, b.lo[axis] + k};
        }
      }
    }
  }
  if (split.axis >= 0) return split;

  // Bisection of the longest side.
  const int axis = order[0];
  if (!bisect || len[axis] < 2) return {};
  return {axis, b.lo[axis] + len[axis] / 2 - 1};
}

}  // namespace

std::vector<ClusterBox> cluster(const FlagField& flags, double efficiency_threshold) {
  if (!(efficiency_threshold > 0.0 && efficiency_threshold <= 1.0)) {
    throw OutOfRangeError("efficiency threshold must lie in (0, 1]");
  }
  std::vector<ClusterBox> out;
  std::vector<ClusterBox> work{ClusterBox{flags.lo, flags.hi, 0}};
  while (!work.empty()) {
    ClusterBox b = shrink(flags, work.back());
    work.pop_back();
    if (b.flagged == 0) continue;
    const bool efficient = b.efficiency() >= efficiency_threshold;
    if (b.cells() == 1 || b.flagged == b.cells()) {
      out.push_back(b);
      continue;
    }
    const Split s = find_split(flags, b, !efficient);
    if (efficient && s.axis >= 0) {
      // An efficient box is still split at a hole or inflection when the
      // two shrunk halves cover clearly fewer cells than the box.
      ClusterBox lo_half = b, hi_half = b;
      lo_half.hi[s.axis] = s.last;
      hi_half.lo[s.axis] = s.last + 1;
      auto covered = [&](const ClusterBox& h) {
        const ClusterBox t = shrink(flags, h);
        return t.flagged == 0 ? std::size_t{0} : t.cells();
      };
      const std::size_t halves = covered(lo_half) + covered(hi_half);
      if (static_cast<double>(halves) >= kCombineEfficiency * static_cast<double>(b.cells())) {
        out.push_back(b);
        continue;
      }
    }
    if (s.axis < 0) {
      out.push_back(b);
      continue;
    }
    ClusterBox lower = b;
    ClusterBox upper = b;
    lower.hi[s.axis] = s.last;
    upper.lo[s.axis] = s.last + 1;
    // Depth-first on the lower half keeps the output ordered.
    work.push_back(upper);
    work.push_back(lower);
  }
  return out;
}

}  // namespace adjamr
