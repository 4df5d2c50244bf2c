#include "adjamr/equations.hpp"

#include <cmath>

#include "adjamr/errors.hpp"

namespace adjamr {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Acoustics1D: return "acoustics-1d";
    case SystemKind::Acoustics2D: return "acoustics-2d";
    case SystemKind::SweLinear2D: return "swe-linear-2d";
  }
  return "unknown";
}

SystemKind system_from_string(const std::string& name) {
  if (name == "acoustics-1d") return SystemKind::Acoustics1D;
  if (name == "acoustics-2d") return SystemKind::Acoustics2D;
  if (name == "swe-linear-2d") return SystemKind::SweLinear2D;
  throw ConfigError("unknown equation set '" + name + "'");
}

MaterialModel MaterialModel::acoustics(double bulk, double density,
                                       std::vector<AcousticLayer> layers) {
  MaterialModel m;
  m.swe_ = false;
  m.bulk_ = bulk;
  m.density_ = density;
  m.layers_ = std::move(layers);
  return m;
}

MaterialModel MaterialModel::shallow_water(double base, double sea_level, double gravity,
                                           std::vector<BathymetryRamp> ramps,
                                           std::vector<BathymetryIsland> islands) {
  MaterialModel m;
  m.swe_ = true;
  m.base_ = base;
  m.sea_level_ = sea_level;
  m.gravity_ = gravity;
  m.ramps_ = std::move(ramps);
  m.islands_ = std::move(islands);
  return m;
}

double MaterialModel::bathymetry(Point p) const {
  double b = base_;
  for (const auto& r : ramps_) {
    const double s = r.axis == 0 ? p.x : p.y;
    double frac = (s - r.start) / (r.end - r.start);
    frac = frac < 0.0 ? 0.0 : (frac > 1.0 ? 1.0 : frac);
    b += frac * r.rise;
  }
  for (const auto& isl : islands_) {
    const double dx = p.x - isl.x, dy = p.y - isl.y;
    b += isl.height * std::exp(-(dx * dx + dy * dy) / (isl.radius * isl.radius));
  }
  return b;
}

CellMaterial MaterialModel::at(Point p) const {
  CellMaterial cm;
  if (swe_) {
    cm.gravity = gravity_;
    cm.depth = sea_level_ - bathymetry(p);
    cm.wet = cm.depth > 0.0;
    return cm;
  }
  cm.bulk = bulk_;
  cm.density = density_;
  for (const auto& l : layers_) {
    if (p.x >= l.xlo && p.x < l.xhi && p.y >= l.ylo && p.y < l.yhi) {
      cm.bulk = l.bulk;
      cm.density = l.density;
    }
  }
  return cm;
}

bool MaterialModel::is_uniform() const {
  if (swe_) return ramps_.empty() && islands_.empty();
  for (const auto& l : layers_) {
    if (l.bulk != bulk_ || l.density != density_) return false;
  }
  return true;
}

EquationSet EquationSet::forward(SystemKind kind, MaterialModel material) {
  EquationSet eq;
  eq.kind = kind;
  eq.material = std::move(material);
  eq.role = Role::Forward;
  eq.form = Form::Wave;
  eq.time_sign = 1.0;
  return eq;
}

EquationSet EquationSet::adjoint(SystemKind kind, MaterialModel material, bool reversed) {
  EquationSet eq;
  eq.kind = kind;
  eq.material = std::move(material);
  eq.role = Role::Adjoint;
  eq.form = Form::FWave;
  eq.time_sign = reversed ? -1.0 : 1.0;
  return eq;
}

CellCoeffs EquationSet::coeffs(const CellMaterial& mat) const {
  CellCoeffs cc;
  double a = 0.0, b = 0.0;
  if (kind == SystemKind::SweLinear2D) {
    cc.wet = mat.wet && mat.depth > 0.0;
    if (!cc.wet) return cc;
    if (!(mat.gravity > 0.0)) throw InvalidMaterialError("gravity must be positive");
    a = 1.0;
    b = mat.gravity * mat.depth;
  } else {
    if (!(mat.bulk > 0.0) || !(mat.density > 0.0)) {
      throw InvalidMaterialError("bulk modulus and density must be positive");
    }
    a = mat.bulk;
    b = 1.0 / mat.density;
  }
  if (role == Role::Adjoint) std::swap(a, b);
  cc.a = time_sign * a;
  cc.b = time_sign * b;
  cc.c = std::sqrt(a * b);
  return cc;
}

void EquationSet::flux(Direction d, std::span<const double> q, const CellCoeffs& cc,
                       std::span<double> out) const {
  const int n = normal_component(d);
  for (int k = 0; k < m(); ++k) out[k] = 0.0;
  out[0] = cc.a * q[n];
  out[n] = cc.b * q[0];
}

namespace {

// Coefficients of the two eigenvector expansions of `delta` (block part):
// left-going r1 = (a_l, -c_l), right-going r2 = (a_r, c_r).
inline void split_block(const CellCoeffs& cl, const CellCoeffs& cr, double d0, double dn,
                        double& alpha1, double& alpha2) {
  const double det = cl.a * cr.c + cr.a * cl.c;
  alpha1 = (cr.c * d0 - cr.a * dn) / det;
  alpha2 = (cl.c * d0 + cl.a * dn) / det;
}

}  // namespace

void riemann_solve(const EquationSet& eq, Direction d, const double* ql, const double* qr,
                   const CellCoeffs& cl, const CellCoeffs& cr, RiemannResult& out) {
  const int m = eq.m();
  const int n = EquationSet::normal_component(d);
  out.m = m;
  out.num_waves = m == 2 ? 2 : 3;
  double d0, dn;
  if (eq.form == Form::Wave) {
    d0 = qr[0] - ql[0];
    dn = qr[n] - ql[n];
  } else {
    d0 = cr.a * qr[n] - cl.a * ql[n];
    dn = cr.b * qr[0] - cl.b * ql[0];
  }
  double a1, a2;
  split_block(cl, cr, d0, dn, a1, a2);
  for (auto& w : out.waves) w.fill(0.0);
  out.waves[0][0] = a1 * cl.a;
  out.waves[0][n] = -a1 * cl.c;
  out.waves[1][0] = a2 * cr.a;
  out.waves[1][n] = a2 * cr.c;
  out.speeds = {-cl.c, cr.c, 0.0};
  if (m == 3) {
    const int t = 3 - n;  // passive component
    out.waves[2][t] = eq.form == Form::Wave ? qr[t] - ql[t] : 0.0;
  }
  out.fluct_minus.fill(0.0);
  out.fluct_plus.fill(0.0);
  if (eq.form == Form::Wave) {
    out.fluct_minus[0] = -cl.c * out.waves[0][0];
    out.fluct_minus[n] = -cl.c * out.waves[0][n];
    out.fluct_plus[0] = cr.c * out.waves[1][0];
    out.fluct_plus[n] = cr.c * out.waves[1][n];
  } else {
    out.fluct_minus[0] = out.waves[0][0];
    out.fluct_minus[n] = out.waves[0][n];
    out.fluct_plus[0] = out.waves[1][0];
    out.fluct_plus[n] = out.waves[1][n];
  }
}

void transverse_split(const EquationSet& eq, Direction normal, const double* fluct,
                      const CellCoeffs& below, const CellCoeffs& center, const CellCoeffs& above,
                      TransverseSplit& out) {
  (void)eq;
  const int t = normal == Direction::X ? 2 : 1;  // normal component of the transverse direction
  out.down.fill(0.0);
  out.up.fill(0.0);
  const double d0 = fluct[0], dt = fluct[t];
  double a1, a2, unused;
  split_block(below, center, d0, dt, a1, unused);
  split_block(center, above, d0, dt, unused, a2);
  out.down[0] = -below.c * a1 * below.a;
  out.down[t] = below.c * a1 * below.c;
  out.up[0] = above.c * a2 * above.a;
  out.up[t] = above.c * a2 * above.c;
}

namespace {

void require_size(std::span<const double> q, int m) {
  if (static_cast<int>(q.size()) < m) throw OutOfRangeError("state has too few components");
}

}  // namespace

RiemannResult acoustics_rp_1d(std::span<const double> q_left, std::span<const double> q_right,
                              const CellMaterial& mat_left, const CellMaterial& mat_right) {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics1D, MaterialModel::acoustics(1, 1));
  require_size(q_left, 2);
  require_size(q_right, 2);
  RiemannResult r;
  riemann_solve(eq, Direction::X, q_left.data(), q_right.data(), eq.coeffs(mat_left),
                eq.coeffs(mat_right), r);
  return r;
}

RiemannResult acoustics_rp_normal_2d(Direction d, std::span<const double> q_left,
                                     std::span<const double> q_right,
                                     const CellMaterial& mat_left,
                                     const CellMaterial& mat_right) {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1));
  require_size(q_left, 3);
  require_size(q_right, 3);
  RiemannResult r;
  riemann_solve(eq, d, q_left.data(), q_right.data(), eq.coeffs(mat_left), eq.coeffs(mat_right), r);
  return r;
}

TransverseSplit acoustics_rp_transverse_2d(Direction normal, std::span<const double> fluct,
                                           const CellMaterial& mat_below,
                                           const CellMaterial& mat_center,
                                           const CellMaterial& mat_above) {
  const EquationSet eq = EquationSet::forward(SystemKind::Acoustics2D, MaterialModel::acoustics(1, 1));
  require_size(fluct, 3);
  TransverseSplit s;
  transverse_split(eq, normal, fluct.data(), eq.coeffs(mat_below), eq.coeffs(mat_center),
                   eq.coeffs(mat_above), s);
  return s;
}

RiemannResult adjoint_fwave_rp(SystemKind system, Direction d, std::span<const double> q_left,
                               std::span<const double> q_right, const CellMaterial& mat_left,
                               const CellMaterial& mat_right) {
  const MaterialModel placeholder = system == SystemKind::SweLinear2D
                                        ? MaterialModel::shallow_water(-1, 0, 9.81)
                                        : MaterialModel::acoustics(1, 1);
  const EquationSet eq = EquationSet::adjoint(system, placeholder, false);
  require_size(q_left, eq.m());
  require_size(q_right, eq.m());
  const CellCoeffs cl = eq.coeffs(mat_left), cr = eq.coeffs(mat_right);
  if (!cl.wet || !cr.wet) throw DryCellError("adjoint Riemann problem with a dry cell");
  RiemannResult r;
  riemann_solve(eq, d, q_left.data(), q_right.data(), cl, cr, r);
  return r;
}

RiemannResult swe_linear_rp(Direction d, std::span<const double> q_left,
                            std::span<const double> q_right, const CellMaterial& mat_left,
                            const CellMaterial& mat_right) {
  const EquationSet eq =
      EquationSet::forward(SystemKind::SweLinear2D, MaterialModel::shallow_water(-1, 0, 9.81));
  require_size(q_left, 3);
  require_size(q_right, 3);
  const CellCoeffs cl = eq.coeffs(mat_left), cr = eq.coeffs(mat_right);
  if (!cl.wet || !cr.wet) throw DryCellError("shallow water Riemann problem with a dry cell");
  RiemannResult r;
  riemann_solve(eq, d, q_left.data(), q_right.data(), cl, cr, r);
  return r;
}

StateVec wall_mirror(const double* q, int m, Direction d) {
  StateVec s{};
  for (int k = 0; k < m; ++k) s[k] = q[k];
  s[EquationSet::normal_component(d)] = -s[EquationSet::normal_component(d)];
  return s;
}

}  // namespace adjamr
