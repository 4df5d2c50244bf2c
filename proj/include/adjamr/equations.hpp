#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "adjamr/geometry.hpp"

namespace adjamr {

enum class SystemKind { Acoustics1D, Acoustics2D, SweLinear2D };
enum class Form { Wave, FWave };
/// Forward problems use A(x); adjoint problems use its transpose.
enum class Role { Forward, Adjoint };
enum class Direction { X = 0, Y = 1 };

std::string to_string(SystemKind kind);
SystemKind system_from_string(const std::string& name);

/// Material data at one point.
struct CellMaterial {
  double bulk = 1.0;     // K, acoustics
  double density = 1.0;  // rho, acoustics
  double depth = 0.0;    // background depth h = sea_level - B, SWE
  double gravity = 9.81;
  bool wet = true;
};

/// Acoustic layer: a rectangle (x only in 1D) of constant K and rho.
/// Later layers override earlier ones.
struct AcousticLayer {
  double xlo = 0.0, xhi = 0.0, ylo = -1e300, yhi = 1e300;
  double bulk = 1.0, density = 1.0;
};

/// Gaussian bump added to the bathymetry: height * exp(-(r/radius)^2).
struct BathymetryIsland {
  double x = 0.0, y = 0.0, radius = 1.0, height = 0.0;
};

/// Linear rise of the bathymetry along x (axis 0) or y (axis 1): zero below
/// `start`, `rise` beyond `end`, linear between.
struct BathymetryRamp {
  int axis = 0;
  double start = 0.0, end = 1.0, rise = 0.0;
};

/// Analytic material description evaluated at cell centers.
class MaterialModel {
 public:
  static MaterialModel acoustics(double bulk, double density,
                                 std::vector<AcousticLayer> layers = {});
  static MaterialModel shallow_water(double base, double sea_level, double gravity,
                                     std::vector<BathymetryRamp> ramps = {},
                                     std::vector<BathymetryIsland> islands = {});

  bool is_shallow_water() const { return swe_; }
  CellMaterial at(Point p) const;
  double bathymetry(Point p) const;
  double sea_level() const { return sea_level_; }
  double gravity() const { return gravity_; }
  double bulk() const { return bulk_; }
  double density() const { return density_; }
  const std::vector<AcousticLayer>& layers() const { return layers_; }
  const std::vector<BathymetryRamp>& ramps() const { return ramps_; }
  const std::vector<BathymetryIsland>& islands() const { return islands_; }
  double base() const { return base_; }
  /// True when the material is the same at every point.
  bool is_uniform() const;

 private:
  bool swe_ = false;
  double bulk_ = 1.0, density_ = 1.0;
  std::vector<AcousticLayer> layers_;
  double base_ = -1.0, sea_level_ = 0.0, gravity_ = 9.81;
  std::vector<BathymetryRamp> ramps_;
  std::vector<BathymetryIsland> islands_;
};

/// Coefficients of the 2x2 block [[0, a], [b, 0]] coupling component 0 with
/// the normal component; the remaining component is carried at speed zero.
/// Every system here has the same block in x and y.
struct CellCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  // sqrt(a b)
  bool wet = true;
};

/// A hyperbolic system with its material data.
struct EquationSet {
  SystemKind kind = SystemKind::Acoustics1D;
  MaterialModel material = MaterialModel::acoustics(1.0, 1.0);
  Role role = Role::Forward;
  Form form = Form::Wave;
  // -1 for the time-reversed adjoint problem q_t - (A^T q)_x = 0.
  double time_sign = 1.0;

  static EquationSet forward(SystemKind kind, MaterialModel material);
  /// Adjoint in f-wave form, optionally time reversed.
  static EquationSet adjoint(SystemKind kind, MaterialModel material, bool reversed);

  int m() const { return kind == SystemKind::Acoustics1D ? 2 : 3; }
  int dims() const { return kind == SystemKind::Acoustics1D ? 1 : 2; }
  bool shallow_water() const { return kind == SystemKind::SweLinear2D; }
  static int normal_component(Direction d) { return d == Direction::X ? 1 : 2; }

  /// Block coefficients for one material. Throws InvalidMaterialError for
  /// nonpositive K or rho.
  CellCoeffs coeffs(const CellMaterial& mat) const;
  /// Flux of one state along direction d (f-wave form and tests).
  void flux(Direction d, std::span<const double> q, const CellCoeffs& cc,
            std::span<double> out) const;
};

constexpr int kMaxComponents = 3;
using StateVec = std::array<double, kMaxComponents>;

/// Waves (jumps or f-waves), speeds and fluctuations from one interface.
struct RiemannResult {
  int num_waves = 0;
  int m = 0;
  std::array<StateVec, kMaxComponents> waves{};
  StateVec speeds{};
  StateVec fluct_minus{};
  StateVec fluct_plus{};
};

/// Generic interface solve for any equation set. Both cells must be wet.
void riemann_solve(const EquationSet& eq, Direction d, const double* ql, const double* qr,
                   const CellCoeffs& cl, const CellCoeffs& cr, RiemannResult& out);

/// Down-going and up-going parts of a normal fluctuation, already scaled by
/// the transverse speeds.
struct TransverseSplit {
  StateVec down{};
  StateVec up{};
};

/// Splits a fluctuation along the transverse direction of `normal`, using the
/// cell below, the cell holding the fluctuation, and the cell above.
void transverse_split(const EquationSet& eq, Direction normal, const double* fluct,
                      const CellCoeffs& below, const CellCoeffs& center,
                      const CellCoeffs& above, TransverseSplit& out);

RiemannResult acoustics_rp_1d(std::span<const double> q_left, std::span<const double> q_right,
                              const CellMaterial& mat_left, const CellMaterial& mat_right);

RiemannResult acoustics_rp_normal_2d(Direction d, std::span<const double> q_left,
                                     std::span<const double> q_right,
                                     const CellMaterial& mat_left,
                                     const CellMaterial& mat_right);

TransverseSplit acoustics_rp_transverse_2d(Direction normal, std::span<const double> fluct,
                                           const CellMaterial& mat_below,
                                           const CellMaterial& mat_center,
                                           const CellMaterial& mat_above);

/// f-wave solve of the adjoint flux A^T q (or B^T q in y).
RiemannResult adjoint_fwave_rp(SystemKind system, Direction d, std::span<const double> q_left,
                               std::span<const double> q_right, const CellMaterial& mat_left,
                               const CellMaterial& mat_right);

/// Linearized shallow water solve; throws DryCellError if either side is dry.
RiemannResult swe_linear_rp(Direction d, std::span<const double> q_left,
                            std::span<const double> q_right, const CellMaterial& mat_left,
                            const CellMaterial& mat_right);

/// Mirror state used as the wall neighbour of a wet cell: the normal
/// velocity or momentum is negated.
StateVec wall_mirror(const double* q, int m, Direction d);

}  // namespace adjamr
