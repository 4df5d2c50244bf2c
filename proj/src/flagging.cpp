#include <algorithm>
#include <cmath>

#include "adjamr/amr.hpp"
#include "adjamr/errors.hpp"

namespace adjamr {

FlagField::FlagField(Index2 lo_, Index2 hi_) : lo(lo_), hi(hi_) {
  if (hi[0] < lo[0] || hi[1] < lo[1]) throw OutOfRangeError("flag field with empty box");
  flags.assign(static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny()), 0);
}

std::size_t FlagField::count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

bool RefinementRegion::contains(Point p, double t, int dims) const {
  if (t < t_start || t > t_end) return false;
  if (p.x < xlo || p.x > xhi) return false;
  return dims == 1 || (p.y >= ylo && p.y <= yhi);
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Difference: return "difference";
    case StrategyKind::Surface: return "surface";
    case StrategyKind::Adjoint: return "adjoint";
    case StrategyKind::Everywhere: return "everywhere";
  }
  return "?";
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "difference") return StrategyKind::Difference;
  if (name == "surface") return StrategyKind::Surface;
  if (name == "adjoint") return StrategyKind::Adjoint;
  if (name == "everywhere") return StrategyKind::Everywhere;
  throw ConfigError("unknown flagging strategy '" + name + "'");
}

namespace {

bool wet(const CoeffField* coeffs, int i, int j) {
  return coeffs == nullptr || coeffs->at(i, j).wet;
}

void flag_difference(const Patch& patch, double tol, const CoeffField* coeffs, FlagField& out) {
  const PatchSpec& s = patch.spec();
  const int m = patch.m();
  const int offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  const int nbrs = s.dims == 2 ? 4 : 2;
#pragma omp parallel for schedule(static)
  for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
    for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
      if (!wet(coeffs, i, j)) continue;
      bool flag = false;
      for (int n = 0; n < nbrs && !flag; ++n) {
        const int ni = i + offsets[n][0];
        const int nj = j + offsets[n][1];
        if (!wet(coeffs, ni, nj)) continue;
        for (int k = 0; k < m; ++k) {
          if (std::abs(patch.at(ni, nj, k) - patch.at(i, j, k)) > tol) {
            flag = true;
            break;
          }
        }
      }
      if (flag) out.set(i, j);
    }
  }
}

}  // namespace

FlagField flag_cells(const Patch& patch, const FlaggingStrategy& strategy,
                     const FlagContext& context) {
  const PatchSpec& s = patch.spec();
  FlagField out = FlagField::for_patch(s);
  out.strategy = to_string(strategy.kind);
  out.time = context.time;
  switch (strategy.kind) {
    case StrategyKind::Difference:
      flag_difference(patch, strategy.tolerance, context.coeffs, out);
      break;
    case StrategyKind::Surface:
      for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
        for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
          if (wet(context.coeffs, i, j) && std::abs(patch.at(i, j, 0)) > strategy.tolerance) {
            out.set(i, j);
          }
        }
      }
      break;
    case StrategyKind::Adjoint: {
      if (context.store == nullptr) {
        throw ConfigError("adjoint flagging requires an adjoint snapshot store");
      }
      FlagField f = inner_product_flags(patch, context.coeffs, context.time, *context.store,
                                        context.window, strategy.tolerance);
      out.flags = std::move(f.flags);
      break;
    }
    case StrategyKind::Everywhere:
      std::fill(out.flags.begin(), out.flags.end(), std::uint8_t{1});
      break;
  }
  const int new_level = context.level + 1;
  for (const RefinementRegion& r : context.regions) {
    const bool forbid = new_level > r.max_level;
    const bool require = new_level <= r.min_level;
    if (!forbid && !require) continue;
    for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
      for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
        if (!r.contains(cell_center(s, i, j), context.time, s.dims)) continue;
        if (forbid) {
          out.set(i, j, false);
        } else {
          out.set(i, j, true);
        }
      }
    }
  }
  return out;
}

FlagField buffer_flags(const FlagField& flags, int buffer_cells) {
  if (buffer_cells < 0) throw OutOfRangeError("buffer width must be nonnegative");
  FlagField out = flags;
  if (buffer_cells == 0) return out;
  const int by = flags.ny() > 1 ? buffer_cells : 0;
  // Separable dilation: along x, then along y.
  FlagField tmp(flags.lo, flags.hi);
  for (int j = flags.lo[1]; j <= flags.hi[1]; ++j) {
    for (int i = flags.lo[0]; i <= flags.hi[0]; ++i) {
      if (!flags.get(i, j)) continue;
      for (int di = std::max(flags.lo[0], i - buffer_cells);
           di <= std::min(flags.hi[0], i + buffer_cells); ++di) {
        tmp.set(di, j);
      }
    }
  }
  std::fill(out.flags.begin(), out.flags.end(), std::uint8_t{0});
  for (int j = flags.lo[1]; j <= flags.hi[1]; ++j) {
    for (int i = flags.lo[0]; i <= flags.hi[0]; ++i) {
      if (!tmp.get(i, j)) continue;
      for (int dj = std::max(flags.lo[1], j - by); dj <= std::min(flags.hi[1], j + by); ++dj) {
        out.set(i, dj);
      }
    }
  }
  return out;
}

}  // namespace adjamr
