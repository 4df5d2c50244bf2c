#include <algorithm>

#include "adjamr/solver.hpp"

namespace adjamr {

double select_dt(const CoeffField& coarse, double courant_target, double dt_max) {
  double cmax = 0.0;
  for (const CellCoeffs& c : coarse.cells) {
    if (c.wet) cmax = std::max(cmax, c.c);
  }
  if (cmax <= 0.0) return dt_max;
  const PatchSpec& s = coarse.spec;
  const double h = s.dims == 2 ? std::min(s.dx, s.dy) : s.dx;
  return std::min(dt_max, courant_target * h / cmax);
}

}  // namespace adjamr
