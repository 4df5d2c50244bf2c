#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "adjamr/errors.hpp"
#include "adjamr/solver.hpp"
#include "kernel_common.hpp"

namespace adjamr {

namespace {

using detail::InterfaceSolve;

// One line of cells along the sweep direction, viewed with strides so that
// the same code serves rows (x sweeps) and columns (y sweeps).
struct Pencil {
  const double* q = nullptr;          // cell 0 of the pencil
  std::ptrdiff_t qstride = 0;         // doubles between neighbouring cells
  const CellCoeffs* c = nullptr;      // coefficients of cell 0
  const CellCoeffs* below = nullptr;  // neighbouring pencils (2D only)
  const CellCoeffs* above = nullptr;
  std::ptrdiff_t cstride = 0;
  int n = 0;
};

struct SweepScratch {
  std::vector<InterfaceSolve> solves;
  std::vector<double> cq;
};

// Computes the normal update dq (already scaled) for the n pencil cells and,
// in 2D, the transverse edge fluxes below (tb) and above (tt) each cell.
void sweep(const EquationSet& eq, Direction d, const Pencil& p, double dtdx,
           LimiterKind limiter, SweepScratch& s, double* dq, double* tb, double* tt) {
  const int m = eq.m();
  const int n = p.n;
  // Interfaces k = -1 .. n+1 sit between cells k-1 and k.
  s.solves.resize(static_cast<std::size_t>(n + 3));
  s.cq.assign(static_cast<std::size_t>((n + 1) * m), 0.0);
  auto solve_at = [&](int k) -> InterfaceSolve& {
    return s.solves[static_cast<std::size_t>(k + 1)];
  };
  for (int k = -1; k <= n + 1; ++k) {
    const double* ql = p.q + (k - 1) * p.qstride;
    const double* qr = p.q + k * p.qstride;
    detail::solve_interface(eq, d, ql, qr, p.c[(k - 1) * p.cstride], p.c[k * p.cstride],
                            solve_at(k));
  }
  for (int k = 0; k <= n; ++k) {
    detail::correction(eq, solve_at(k - 1), solve_at(k), solve_at(k + 1), dtdx, limiter,
                       s.cq.data() + k * m);
  }

  if (dq != nullptr) {
    for (int i = 0; i < n; ++i) {
      const RiemannResult& left = solve_at(i).rr;
      const RiemannResult& right = solve_at(i + 1).rr;
      const double* fl = s.cq.data() + i * m;
      const double* fr = s.cq.data() + (i + 1) * m;
      for (int k = 0; k < m; ++k) {
        dq[i * m + k] = -dtdx * (left.fluct_plus[k] + right.fluct_minus[k]) -
                        dtdx * 0.5 * (fr[k] - fl[k]);
      }
    }
  }
  if (tb == nullptr) return;

  std::fill(tb, tb + n * m, 0.0);
  std::fill(tt, tt + n * m, 0.0);
  const Direction normal = d;
  TransverseSplit split;
  StateVec fl{};
  auto spread = [&](int cell) {
    const CellCoeffs& center = p.c[cell * p.cstride];
    const CellCoeffs& lo = p.below[cell * p.cstride];
    const CellCoeffs& hi = p.above[cell * p.cstride];
    if (!center.wet) return;
    transverse_split(eq, normal, fl.data(), lo.wet ? lo : center, center,
                     hi.wet ? hi : center, split);
    if (cell < 0 || cell >= n) return;
    for (int k = 0; k < m; ++k) {
      if (lo.wet) tb[cell * m + k] -= 0.5 * dtdx * split.down[k];
      if (hi.wet) tt[cell * m + k] -= 0.5 * dtdx * split.up[k];
    }
  };
  for (int k = 0; k <= n; ++k) {
    const RiemannResult& rr = solve_at(k).rr;
    const double* cq = s.cq.data() + k * m;
    if (k - 1 >= 0) {
      for (int c = 0; c < m; ++c) fl[static_cast<std::size_t>(c)] = rr.fluct_minus[c] + cq[c];
      spread(k - 1);
    }
    if (k < n) {
      for (int c = 0; c < m; ++c) fl[static_cast<std::size_t>(c)] = rr.fluct_plus[c] - cq[c];
      spread(k);
    }
  }
}

[[noreturn]] void throw_cfl(double courant) {
  std::ostringstream os;
  os << "Courant number " << courant << " exceeds 1";
  throw CflViolationError(courant, os.str());
}

}  // namespace

double max_courant(const PatchSpec& spec, const CoeffField& coeffs, double dt) {
  const int gx = spec.ghost_x();
  const int gy = spec.ghost_y();
  double cmax_x = 0.0;
  double cmax_y = 0.0;
  auto speed = [](const CellCoeffs& l, const CellCoeffs& r) {
    return std::max(l.wet ? l.c : 0.0, r.wet ? r.c : 0.0);
  };
  for (int j = spec.lo[1] - gy; j <= spec.hi[1] + gy; ++j) {
    for (int i = spec.lo[0] - gx + 1; i <= spec.hi[0] + gx; ++i) {
      cmax_x = std::max(cmax_x, speed(coeffs.at(i - 1, j), coeffs.at(i, j)));
    }
  }
  if (spec.dims == 2) {
    for (int j = spec.lo[1] - gy + 1; j <= spec.hi[1] + gy; ++j) {
      for (int i = spec.lo[0] - gx; i <= spec.hi[0] + gx; ++i) {
        cmax_y = std::max(cmax_y, speed(coeffs.at(i, j - 1), coeffs.at(i, j)));
      }
    }
  }
  return std::max(cmax_x * dt / spec.dx, spec.dims == 2 ? cmax_y * dt / spec.dy : 0.0);
}

StepResult step_patch(Patch& patch, const CoeffField& coeffs, double dt, const EquationSet& eq,
                      LimiterKind limiter) {
  const PatchSpec& spec = patch.spec();
  const double courant = max_courant(spec, coeffs, dt);
  if (courant > 1.0) throw_cfl(courant);

  const int m = eq.m();
  const int nx = spec.nx();
  const int ny = spec.ny();
  const int tx = spec.total_x();
  const double dtdx = dt / spec.dx;
  const double dtdy = dt / spec.dy;
  const std::ptrdiff_t row = static_cast<std::ptrdiff_t>(tx);
  double* q = patch.data().data();
  const auto qoff = [&](int i, int j) { return static_cast<std::ptrdiff_t>(patch.offset(i, j)); };
  const auto coff = [&](int i, int j) {
    return static_cast<std::ptrdiff_t>(j - spec.lo[1] + spec.ghost_y()) * row +
           (i - spec.lo[0] + spec.ghost_x());
  };
  const CellCoeffs* cbase = coeffs.cells.data();
  const std::size_t nxm = static_cast<std::size_t>(nx * m);
  const std::size_t nym = static_cast<std::size_t>(ny * m);

  if (spec.dims == 1) {
    std::vector<double> dq(nxm);
    SweepScratch s;
    Pencil p{q + qoff(spec.lo[0], spec.lo[1]), m, cbase + coff(spec.lo[0], spec.lo[1]),
             nullptr, nullptr, 1, nx};
    sweep(eq, Direction::X, p, dtdx, limiter, s, dq.data(), nullptr, nullptr);
    for (int i = 0; i < nx; ++i) {
      if (!cbase[coff(spec.lo[0] + i, spec.lo[1])].wet) continue;
      double* cell = q + qoff(spec.lo[0] + i, spec.lo[1]);
      for (int k = 0; k < m; ++k) cell[k] += dq[static_cast<std::size_t>(i * m + k)];
    }
  } else {
    // x sweeps over rows -1..ny, y sweeps over columns -1..nx (local).
    std::vector<double> dqx(static_cast<std::size_t>(ny) * nxm);
    std::vector<double> gb(static_cast<std::size_t>(ny + 2) * nxm);
    std::vector<double> gt(static_cast<std::size_t>(ny + 2) * nxm);
    std::vector<double> dqy(static_cast<std::size_t>(nx) * nym);
    std::vector<double> fl(static_cast<std::size_t>(nx + 2) * nym);
    std::vector<double> fr(static_cast<std::size_t>(nx + 2) * nym);

#pragma omp parallel
    {
      SweepScratch s;
#pragma omp for schedule(static)
      for (int r = -1; r <= ny; ++r) {
        const int j = spec.lo[1] + r;
        Pencil p{q + qoff(spec.lo[0], j), m, cbase + coff(spec.lo[0], j),
                 cbase + coff(spec.lo[0], j - 1), cbase + coff(spec.lo[0], j + 1), 1, nx};
        double* dq = (r >= 0 && r < ny) ? dqx.data() + static_cast<std::size_t>(r) * nxm
                                        : nullptr;
        const std::size_t t = static_cast<std::size_t>(r + 1) * nxm;
        sweep(eq, Direction::X, p, dtdx, limiter, s, dq, gb.data() + t, gt.data() + t);
      }
#pragma omp for schedule(static)
      for (int col = -1; col <= nx; ++col) {
        const int i = spec.lo[0] + col;
        Pencil p{q + qoff(i, spec.lo[1]), static_cast<std::ptrdiff_t>(tx) * m,
                 cbase + coff(i, spec.lo[1]), cbase + coff(i - 1, spec.lo[1]),
                 cbase + coff(i + 1, spec.lo[1]), row, ny};
        double* dq = (col >= 0 && col < nx) ? dqy.data() + static_cast<std::size_t>(col) * nym
                                            : nullptr;
        const std::size_t t = static_cast<std::size_t>(col + 1) * nym;
        sweep(eq, Direction::Y, p, dtdy, limiter, s, dq, fl.data() + t, fr.data() + t);
      }
#pragma omp for schedule(static)
      for (int r = 0; r < ny; ++r) {
        const int j = spec.lo[1] + r;
        for (int c = 0; c < nx; ++c) {
          const int i = spec.lo[0] + c;
          if (!cbase[coff(i, j)].wet) continue;
          double* cell = q + qoff(i, j);
          const std::size_t ex = static_cast<std::size_t>(r) * nxm + static_cast<std::size_t>(c * m);
          const std::size_t ey = static_cast<std::size_t>(c) * nym + static_cast<std::size_t>(r * m);
          // Edge fluxes from the transverse splits. Row r+1 in gb/gt is row r.
          const std::size_t here_x = static_cast<std::size_t>(r + 1) * nxm + static_cast<std::size_t>(c * m);
          const std::size_t here_y = static_cast<std::size_t>(c + 1) * nym + static_cast<std::size_t>(r * m);
          for (int k = 0; k < m; ++k) {
            const double g_top = gt[here_x + k] + gb[here_x + nxm + k];
            const double g_bot = gt[here_x - nxm + k] + gb[here_x + k];
            const double f_right = fr[here_y + k] + fl[here_y + nym + k];
            const double f_left = fr[here_y - nym + k] + fl[here_y + k];
            cell[k] += dqx[ex + k] + dqy[ey + k] - dtdy * (g_top - g_bot) -
                       dtdx * (f_right - f_left);
          }
        }
      }
    }
  }

  for (int j = spec.lo[1]; j <= spec.hi[1]; ++j) {
    for (int i = spec.lo[0]; i <= spec.hi[0]; ++i) {
      const double* cell = q + qoff(i, j);
      for (int k = 0; k < m; ++k) {
        if (!std::isfinite(cell[k])) {
          std::ostringstream os;
          os << "non-finite state in cell (" << i << ", " << j << ")";
          throw NumericalBlowupError(os.str());
        }
      }
    }
  }
  patch.time += dt;
  return {courant};
}

}  // namespace adjamr
