#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "atomcorr/atom_dynamics.hpp"

namespace atomcorr {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using GreenTensor = Eigen::Matrix3cd;

/// Free-space dyadic Green's function G0(r, r_src) at wavenumber k0,
///   e^{ikR}/(4 pi R) [ (1 + i/kR - 1/(kR)^2) 1 - (1 + 3i/kR - 3/(kR)^2) R R / R^2 ].
/// Lengths in any unit consistent with k0. Throws CoincidentPoints when
/// |r - r_src| < 1e-12 / k0.
GreenTensor green_function(const Vec3& r, const Vec3& r_src, double k0);

/// Point emitter: position, real unit dipole orientation and transition wavenumber.
struct Emitter {
  Vec3 position = Vec3::Zero();
  Vec3 dipole = Vec3::UnitX();
  double k0 = 1.0;
};

/// Mean scattered field sqrt(6 pi Gamma0) G0(r, r_a) d Tr(sigma_ge rho). The
/// scale is the one for which |field|^2 is a photon flux per unit area, so that
/// the coherent power through a far sphere is Gamma0 |rho_eg|^2.
CVec3 scattered_field_mean(const Vec3& r, const DriveConfig& cfg, const DensityMatrix& rho,
                           const Emitter& atom);

/// Normally ordered scattered photon flux per unit area, 6 pi Gamma0 |G0 d|^2 rho_ee.
/// Integrated over a far sphere it gives the total emission rate Gamma0 rho_ee.
double scattered_photon_flux(const Vec3& r, const DriveConfig& cfg, const DensityMatrix& rho,
                             const Emitter& atom);

/// Field samples on a rectangular grid in the z = 0 plane, centred on the
/// origin: x_i = (i - (nx - 1) / 2) dx, likewise for y. Row-major with x fastest.
struct ModeGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<CVec3> samples;

  double x(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(nx - 1)) * dx; }
  double y(std::size_t j) const { return (static_cast<double>(j) - 0.5 * static_cast<double>(ny - 1)) * dy; }
  const CVec3& at(std::size_t i, std::size_t j) const { return samples[j * nx + i]; }

  /// Bilinear interpolation; zero outside the sampled rectangle.
  CVec3 interpolate(double x, double y) const;

  /// Throws MalformedModeGrid for inconsistent sizes or non-positive spacing.
  void validate() const;
};

struct Box {
  double xmin, xmax, ymin, ymax;
};

/// A detection mode E(x, y) on the plane z = 0.
///
/// The built-in Gaussian is E0 pol exp(-rho^2 / (2 w^2)): w is the 1/e radius of
/// the intensity profile E0^2 exp(-rho^2 / w^2). With that reading of the waist
/// the norm is E0^2 pi w^2 and the focal efficiency is 3 lambda^2 / (8 pi^2 w^2),
/// consistent with the general efficiency formula evaluated by quadrature.
class ModeSpec {
 public:
  using FieldFn = std::function<CVec3(double x, double y)>;

  static ModeSpec gaussian(double waist, double wavelength, const CVec3& polarization,
                           cplx amplitude = 1.0, double x0 = 0.0, double y0 = 0.0);
  static ModeSpec sampled(ModeGrid grid, double wavelength);
  /// Arbitrary field function; `bounds` must contain its support.
  static ModeSpec custom(FieldFn field, double wavelength, Box bounds);

  CVec3 field(double x, double y) const { return field_(x, y); }
  double wavelength() const { return wavelength_; }
  const Box& bounds() const { return bounds_; }
  /// Non-null for sampled modes.
  const ModeGrid* grid() const { return grid_.get(); }

 private:
  ModeSpec(FieldFn field, double wavelength, Box bounds, std::shared_ptr<const ModeGrid> grid);

  FieldFn field_;
  double wavelength_;
  Box bounds_;
  std::shared_ptr<const ModeGrid> grid_;
};

struct QuadratureOptions {
  std::size_t points = 400;  // per axis, doubled once for the convergence check
  double tolerance = 1e-6;
};

/// Scalar product <a|b> = integral over z = 0 of conj(a) . b.
///
/// Analytic modes use the trapezoid rule on the union of both bounding boxes at
/// `points` and 2 `points` per axis and throw QuadratureNotConverged when the two
/// differ by more than `tolerance` times integral |a||b|. If either mode is
/// sampled, the sum runs over that grid's nodes instead.
cplx mode_overlap(const ModeSpec& a, const ModeSpec& b, const QuadratureOptions& opts = {});

/// eta = (3 pi / 2 k0^2) |E(r_a) . d|^2 / |<E|E>|, k0 = 2 pi / lambda. The atom must
/// sit on the z = 0 plane. Throws InvalidArgument if the result exceeds one
/// (mode tighter than any physical field can be focused).
double collection_efficiency(const ModeSpec& mode, const Vec3& atom_at, const Vec3& dipole,
                             const QuadratureOptions& opts = {});

/// 3 lambda^2 / (8 pi^2 w^2).
double gaussian_eta(double waist, double wavelength);

/// Inverse of gaussian_eta: w / lambda = sqrt(3 / (8 pi^2 eta)).
double waist_over_wavelength(double eta);

}  // namespace atomcorr
