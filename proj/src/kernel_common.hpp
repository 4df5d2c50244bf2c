#pragma once

// Shared pieces of the wave-propagation kernels: interface solves with the
// wet/dry wall rule, and wave limiting.

#include <algorithm>
#include <cmath>

#include "adjamr/equations.hpp"
#include "adjamr/solver.hpp"

namespace adjamr::detail {

struct InterfaceSolve {
  RiemannResult rr;
  bool wall = false;  // one side dry: the wet side sees a reflecting wall
};

/// Solves the interface problem between two cells. A dry neighbour is
/// replaced by the mirror image of the wet cell, so no flux crosses a
/// coastline; two dry cells produce no waves.
inline void solve_interface(const EquationSet& eq, Direction d, const double* ql,
                            const double* qr, const CellCoeffs& cl, const CellCoeffs& cr,
                            InterfaceSolve& out) {
  const int m = eq.m();
  if (cl.wet && cr.wet) {
    out.wall = false;
    riemann_solve(eq, d, ql, qr, cl, cr, out.rr);
    return;
  }
  out.wall = true;
  if (cl.wet) {
    const StateVec ghost = wall_mirror(ql, m, d);
    riemann_solve(eq, d, ql, ghost.data(), cl, cl, out.rr);
  } else if (cr.wet) {
    const StateVec ghost = wall_mirror(qr, m, d);
    riemann_solve(eq, d, ghost.data(), qr, cr, cr, out.rr);
  } else {
    out.rr = RiemannResult{};
    out.rr.m = m;
    out.rr.num_waves = m == 2 ? 2 : 3;
  }
}

/// Second-order correction cqxx = sum_p coef_p (1 - |s_p| dt/dx) limited(W_p),
/// with coef = |s| for waves and sign(s) for f-waves. Only the two moving
/// families contribute; the passive family has zero speed.
inline void correction(const EquationSet& eq, const InterfaceSolve& left,
                       const InterfaceSolve& here, const InterfaceSolve& right, double dtdx,
                       LimiterKind limiter, double* cq) {
  const int m = eq.m();
  for (int k = 0; k < m; ++k) cq[k] = 0.0;
  if (here.wall) return;
  for (int p = 0; p < 2; ++p) {
    const StateVec& w = here.rr.waves[p];
    const double s = here.rr.speeds[p];
    double wnorm2 = 0.0;
    for (int k = 0; k < m; ++k) wnorm2 += w[k] * w[k];
    if (wnorm2 == 0.0) continue;
    const StateVec& wu = s > 0.0 ? left.rr.waves[p] : right.rr.waves[p];
    double dot = 0.0;
    for (int k = 0; k < m; ++k) dot += wu[k] * w[k];
    const double phi = limiter_phi(limiter, dot / wnorm2);
    const double as = std::abs(s);
    const double coef = eq.form == Form::Wave ? as : (s >= 0.0 ? 1.0 : -1.0);
    const double f = coef * (1.0 - as * dtdx) * phi;
    for (int k = 0; k < m; ++k) cq[k] += f * w[k];
  }
}

}  // namespace adjamr::detail
