#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "adjamr/errors.hpp"
#include "adjamr/solver.hpp"
#include "kernel_common.hpp"

namespace adjamr::reference {

namespace {

// Edge-indexed storage over the whole patch storage region.
struct EdgeField {
  int i0 = 0, j0 = 0, ni = 0, nj = 0, m = 0;
  std::vector<double> v;
  EdgeField(int ilo, int ihi, int jlo, int jhi, int comps)
      : i0(ilo), j0(jlo), ni(ihi - ilo + 1), nj(jhi - jlo + 1), m(comps),
        v(static_cast<std::size_t>(ni) * static_cast<std::size_t>(nj) *
              static_cast<std::size_t>(comps),
          0.0) {}
  double* at(int i, int j) {
    return v.data() + (static_cast<std::size_t>(j - j0) * static_cast<std::size_t>(ni) +
                       static_cast<std::size_t>(i - i0)) *
                          static_cast<std::size_t>(m);
  }
};

}  // namespace

StepResult step_patch(Patch& patch, const CoeffField& coeffs, double dt, const EquationSet& eq,
                      LimiterKind limiter) {
  const PatchSpec& spec = patch.spec();
  const double courant = max_courant(spec, coeffs, dt);
  if (courant > 1.0) {
    std::ostringstream os;
    os << "Courant number " << courant << " exceeds 1";
    throw CflViolationError(courant, os.str());
  }
  const int m = eq.m();
  const bool two_d = spec.dims == 2;
  const int ilo = spec.lo[0], ihi = spec.hi[0];
  const int jlo = spec.lo[1], jhi = spec.hi[1];
  const double dtdx = dt / spec.dx;
  const double dtdy = dt / spec.dy;

  // Per x-interface i (between i-1 and i): fluctuations and the total
  // conservative flux correction. Same for y-interfaces.
  EdgeField amdq_x(ilo, ihi + 1, jlo, jhi, m), apdq_x(ilo, ihi + 1, jlo, jhi, m);
  EdgeField flux_x(ilo, ihi + 1, jlo, jhi, m);
  EdgeField amdq_y(ilo, ihi, jlo, jhi + 1, m), apdq_y(ilo, ihi, jlo, jhi + 1, m);
  EdgeField flux_y(ilo, ihi, jlo, jhi + 1, m);

  const int row_lo = two_d ? jlo - 1 : jlo;
  const int row_hi = two_d ? jhi + 1 : jhi;
  std::vector<detail::InterfaceSolve> solves;
  std::vector<double> cq(static_cast<std::size_t>(m));

  auto transverse = [&](Direction normal, const double* fluct, int ci, int cj, double ratio,
                        EdgeField& flux) {
    // The fluctuation sits in cell (ci, cj); spread it across the two
    // transverse edges of that cell.
    const CellCoeffs& center = coeffs.at(ci, cj);
    if (!center.wet) return;
    const int bi = normal == Direction::X ? ci : ci - 1;
    const int bj = normal == Direction::X ? cj - 1 : cj;
    const int ai = normal == Direction::X ? ci : ci + 1;
    const int aj = normal == Direction::X ? cj + 1 : cj;
    const CellCoeffs& lo = coeffs.at(bi, bj);
    const CellCoeffs& hi = coeffs.at(ai, aj);
    TransverseSplit split;
    transverse_split(eq, normal, fluct, lo.wet ? lo : center, center, hi.wet ? hi : center,
                     split);
    // Lower edge of the cell and upper edge, in edge-field indexing.
    const int li = ci, lj = cj;
    const int ui = normal == Direction::X ? ci : ci + 1;
    const int uj = normal == Direction::X ? cj + 1 : cj;
    const bool lower_in = normal == Direction::X ? (ci >= ilo && ci <= ihi && cj >= jlo && cj <= jhi + 1)
                                                 : (cj >= jlo && cj <= jhi && ci >= ilo && ci <= ihi + 1);
    const bool upper_in = normal == Direction::X ? (ui >= ilo && ui <= ihi && uj >= jlo && uj <= jhi + 1)
                                                 : (uj >= jlo && uj <= jhi && ui >= ilo && ui <= ihi + 1);
    for (int k = 0; k < m; ++k) {
      if (lo.wet && lower_in) flux.at(li, lj)[k] -= 0.5 * ratio * split.down[k];
      if (hi.wet && upper_in) flux.at(ui, uj)[k] -= 0.5 * ratio * split.up[k];
    }
  };

  auto sweep = [&](Direction d) {
    const bool along_x = d == Direction::X;
    const int outer_lo = along_x ? row_lo : ilo - 1;
    const int outer_hi = along_x ? row_hi : ihi + 1;
    const int inner_lo = along_x ? ilo : jlo;
    const int inner_hi = along_x ? ihi : jhi;
    const double ratio = along_x ? dtdx : dtdy;
    EdgeField& amdq = along_x ? amdq_x : amdq_y;
    EdgeField& apdq = along_x ? apdq_x : apdq_y;
    EdgeField& own_flux = along_x ? flux_x : flux_y;
    EdgeField& cross_flux = along_x ? flux_y : flux_x;
    for (int o = outer_lo; o <= outer_hi; ++o) {
      const bool interior_line = along_x ? (o >= jlo && o <= jhi) : (o >= ilo && o <= ihi);
      auto cell_of = [&](int s) -> std::pair<int, int> {
        return along_x ? std::pair<int, int>{s, o} : std::pair<int, int>{o, s};
      };
      solves.assign(static_cast<std::size_t>(inner_hi - inner_lo + 4), {});
      for (int s = inner_lo - 1; s <= inner_hi + 2; ++s) {
        const auto [li, lj] = cell_of(s - 1);
        const auto [ri, rj] = cell_of(s);
        detail::solve_interface(eq, d, patch.cell(li, lj).data(), patch.cell(ri, rj).data(),
                                coeffs.at(li, lj), coeffs.at(ri, rj),
                                solves[static_cast<std::size_t>(s - inner_lo + 1)]);
      }
      for (int s = inner_lo; s <= inner_hi + 1; ++s) {
        const std::size_t idx = static_cast<std::size_t>(s - inner_lo + 1);
        const RiemannResult& rr = solves[idx].rr;
        detail::correction(eq, solves[idx - 1], solves[idx], solves[idx + 1], ratio, limiter,
                           cq.data());
        const auto [ei, ej] = cell_of(s);
        if (interior_line) {
          for (int k = 0; k < m; ++k) {
            amdq.at(ei, ej)[k] = rr.fluct_minus[k];
            apdq.at(ei, ej)[k] = rr.fluct_plus[k];
            own_flux.at(ei, ej)[k] += 0.5 * cq[static_cast<std::size_t>(k)];
          }
        }
        if (!two_d) continue;
        StateVec fl{};
        if (s - 1 >= inner_lo) {
          for (int k = 0; k < m; ++k) fl[static_cast<std::size_t>(k)] = rr.fluct_minus[k] + cq[static_cast<std::size_t>(k)];
          const auto [ci, cj] = cell_of(s - 1);
          transverse(d, fl.data(), ci, cj, ratio, cross_flux);
        }
        if (s <= inner_hi) {
          for (int k = 0; k < m; ++k) fl[static_cast<std::size_t>(k)] = rr.fluct_plus[k] - cq[static_cast<std::size_t>(k)];
          const auto [ci, cj] = cell_of(s);
          transverse(d, fl.data(), ci, cj, ratio, cross_flux);
        }
      }
    }
  };

  sweep(Direction::X);
  if (two_d) sweep(Direction::Y);

  for (int j = jlo; j <= jhi; ++j) {
    for (int i = ilo; i <= ihi; ++i) {
      if (!coeffs.at(i, j).wet) continue;
      for (int k = 0; k < m; ++k) {
        double du = -dtdx * (apdq_x.at(i, j)[k] + amdq_x.at(i + 1, j)[k]) -
                    dtdx * (flux_x.at(i + 1, j)[k] - flux_x.at(i, j)[k]);
        if (two_d) {
          du += -dtdy * (apdq_y.at(i, j)[k] + amdq_y.at(i, j + 1)[k]) -
                dtdy * (flux_y.at(i, j + 1)[k] - flux_y.at(i, j)[k]);
        }
        patch.at(i, j, k) += du;
      }
    }
  }
  if (!patch.all_finite()) throw NumericalBlowupError("non-finite state after step");
  patch.time += dt;
  return {courant};
}

}  // namespace adjamr::reference
