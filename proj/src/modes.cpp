#include "atomcorr/modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "atomcorr/errors.hpp"

namespace atomcorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussianExtent = 6.0;  // integration half-width in waists

struct OverlapSums {
  cplx value{0.0, 0.0};
  double magnitude = 0.0;  // integral of |a||b|, the scale for convergence
};

double trapezoid_weight(std::size_t k, std::size_t last) { return (k == 0 || k == last) ? 0.5 : 1.0; }

OverlapSums trapezoid(const ModeSpec& a, const ModeSpec& b, const Box& box, std::size_t intervals) {
  const double hx = (box.xmax - box.xmin) / static_cast<double>(intervals);
  const double hy = (box.ymax - box.ymin) / static_cast<double>(intervals);
  OverlapSums total;
  // row sums first, then rows in order: the result does not depend on threading
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double y = box.ymin + hy * static_cast<double>(j);
    OverlapSums row;
    for (std::size_t i = 0; i <= intervals; ++i) {
      const double x = box.xmin + hx * static_cast<double>(i);
      const CVec3 fa = a.field(x, y);
      const CVec3 fb = b.field(x, y);
      const double w = trapezoid_weight(i, intervals);
      row.value += w * fa.dot(fb);  // Eigen's dot conjugates the left operand
      row.magnitude += w * fa.norm() * fb.norm();
    }
    const double w = trapezoid_weight(j, intervals) * hx * hy;
    total.value += w * row.value;
    total.magnitude += w * row.magnitude;
  }
  return total;
}

cplx grid_sum(const ModeGrid& grid, const ModeSpec& a, const ModeSpec& b) {
  cplx total{0.0, 0.0};
  for (std::size_t j = 0; j < grid.ny; ++j) {
    cplx row{0.0, 0.0};
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      const double y = grid.y(j);
      row += trapezoid_weight(i, grid.nx - 1) * a.field(x, y).dot(b.field(x, y));
    }
    total += trapezoid_weight(j, grid.ny - 1) * row;
  }
  return total * grid.dx * grid.dy;
}

Box union_box(const Box& a, const Box& b) {
  return {std::min(a.xmin, b.xmin), std::max(a.xmax, b.xmax), std::min(a.ymin, b.ymin),
          std::max(a.ymax, b.ymax)};
}

}  // namespace

GreenTensor green_function(const Vec3& r, const Vec3& r_src, double k0) {
  if (!(k0 > 0.0)) throw SimError(ErrorCode::InvalidArgument, "k0 must be > 0");
  const Vec3 sep = r - r_src;
  const double dist = sep.norm();
  if (dist < 1e-12 / k0)
    throw SimError(ErrorCode::CoincidentPoints, "Green's function is singular at R = 0");

  const double kr = k0 * dist;
  const cplx i{0.0, 1.0};
  const cplx phase = std::exp(i * kr) / (4.0 * kPi * dist);
  const cplx transverse = 1.0 + i / kr - 1.0 / (kr * kr);
  const cplx longitudinal = 1.0 + 3.0 * i / kr - 3.0 / (kr * kr);
  const Vec3 unit = sep / dist;

  const Eigen::Matrix3d outer = unit * unit.transpose();
  return phase * (transverse * GreenTensor::Identity() - longitudinal * outer.cast<cplx>());
}

CVec3 scattered_field_mean(const Vec3& r, const DriveConfig& cfg, const DensityMatrix& rho,
                           const Emitter& atom) {
  const GreenTensor g = green_function(r, atom.position, atom.k0);
  const Vec3 d = atom.dipole.normalized();
  return std::sqrt(6.0 * kPi * cfg.gamma0) * rho.eg * (g * d.cast<cplx>());
}

double scattered_photon_flux(const Vec3& r, const DriveConfig& cfg, const DensityMatrix& rho,
                             const Emitter& atom) {
  const GreenTensor g = green_function(r, atom.position, atom.k0);
  const Vec3 d = atom.dipole.normalized();
  return 6.0 * kPi * cfg.gamma0 * (g * d.cast<cplx>()).squaredNorm() * rho.ee;
}

CVec3 ModeGrid::interpolate(double px, double py) const {
  const double fx = px / dx + 0.5 * static_cast<double>(nx - 1);
  const double fy = py / dy + 0.5 * static_cast<double>(ny - 1);
  if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(nx - 1) || fy > static_cast<double>(ny - 1))
    return CVec3::Zero();
  const auto i0 = std::min(static_cast<std::size_t>(fx), nx > 1 ? nx - 2 : 0);
  const auto j0 = std::min(static_cast<std::size_t>(fy), ny > 1 ? ny - 2 : 0);
  const std::size_t i1 = std::min(i0 + 1, nx - 1);
  const std::size_t j1 = std::min(j0 + 1, ny - 1);
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);
  return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i1, j0) + (1 - tx) * ty * at(i0, j1) +
         tx * ty * at(i1, j1);
}

void ModeGrid::validate() const {
  if (nx < 2 || ny < 2) throw SimError(ErrorCode::MalformedModeGrid, "grid needs at least 2x2 points");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw SimError(ErrorCode::MalformedModeGrid, "grid spacing must be finite and > 0");
  if (samples.size() != nx * ny)
    throw SimError(ErrorCode::MalformedModeGrid, "expected " + std::to_string(nx * ny) + " samples, got " +
                                                     std::to_string(samples.size()));
  for (const CVec3& s : samples)
    if (!s.allFinite()) throw SimError(ErrorCode::MalformedModeGrid, "non-finite field sample");
}

ModeSpec::ModeSpec(FieldFn field, double wavelength, Box bounds, std::shared_ptr<const ModeGrid> grid)
    : field_(std::move(field)), wavelength_(wavelength), bounds_(bounds), grid_(std::move(grid)) {
  if (!(wavelength_ > 0.0)) throw SimError(ErrorCode::InvalidArgument, "wavelength must be > 0");
}

ModeSpec ModeSpec::gaussian(double waist, double wavelength, const CVec3& polarization, cplx amplitude,
                            double x0, double y0) {
  if (!(waist > 0.0)) throw SimError(ErrorCode::InvalidArgument, "waist must be > 0");
  if (!(polarization.norm() > 0.0)) throw SimError(ErrorCode::InvalidArgument, "zero polarization");
  const CVec3 pol = amplitude * polarization.normalized();
  const double inv = 1.0 / (2.0 * waist * waist);
  auto field = [pol, inv, x0, y0](double x, double y) -> CVec3 {
    const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
    return pol * std::exp(-r2 * inv);
  };
  const double half = kGaussianExtent * waist;
  return ModeSpec(field, wavelength, {x0 - half, x0 + half, y0 - half, y0 + half}, nullptr);
}

ModeSpec ModeSpec::sampled(ModeGrid grid, double wavelength) {
  grid.validate();
  auto shared = std::make_shared<const ModeGrid>(std::move(grid));
  const Box box{shared->x(0), shared->x(shared->nx - 1), shared->y(0), shared->y(shared->ny - 1)};
  auto field = [shared](double x, double y) { return shared->interpolate(x, y); };
  return ModeSpec(field, wavelength, box, shared);
}

ModeSpec ModeSpec::custom(FieldFn field, double wavelength, Box bounds) {
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
    throw SimError(ErrorCode::InvalidArgument, "empty integration box");
  return ModeSpec(std::move(field), wavelength, bounds, nullptr);
}

cplx mode_overlap(const ModeSpec& a, const ModeSpec& b, const QuadratureOptions& opts) {
  if (a.grid() != nullptr) return grid_sum(*a.grid(), a, b);
  if (b.grid() != nullptr) return grid_sum(*b.grid(), a, b);

  const Box box = union_box(a.bounds(), b.bounds());
  const OverlapSums coarse = trapezoid(a, b, box, opts.points);
  const OverlapSums fine = trapezoid(a, b, box, 2 * opts.points);
  const double change = std::abs(fine.value - coarse.value);
  if (change > opts.tolerance * fine.magnitude)
    throw SimError(ErrorCode::QuadratureNotConverged,
                   "doubling the grid changed the overlap by " + std::to_string(change / fine.magnitude) +
                       " relative");
  return fine.value;
}

double collection_efficiency(const ModeSpec& mode, const Vec3& atom_at, const Vec3& dipole,
                             const QuadratureOptions& opts) {
  if (std::abs(atom_at.z()) > 0.0)
    throw SimError(ErrorCode::InvalidArgument, "atom must lie on the z = 0 reference plane");
  if (!(dipole.norm() > 0.0)) throw SimError(ErrorCode::InvalidArgument, "zero dipole orientation");

  const double norm = std::abs(mode_overlap(mode, mode, opts));
  if (!(norm > 0.0)) throw SimError(ErrorCode::InvalidArgument, "mode has zero norm");
  const double k0 = 2.0 * kPi / mode.wavelength();
  const cplx projection = mode.field(atom_at.x(), atom_at.y()).transpose() * dipole.normalized().cast<cplx>();
  const double eta = 3.0 * kPi / (2.0 * k0 * k0) * std::norm(projection) / norm;
  if (eta > 1.0)
    throw SimError(ErrorCode::InvalidArgument,
                   "efficiency " + std::to_string(eta) + " > 1: mode is focused beyond physical limits");
  return eta;
}

double gaussian_eta(double waist, double wavelength) {
  if (!(waist > 0.0) || !(wavelength > 0.0))
    throw SimError(ErrorCode::InvalidArgument, "waist and wavelength must be > 0");
  if (std::isinf(waist)) return 0.0;
  return 3.0 * wavelength * wavelength / (8.0 * kPi * kPi * waist * waist);
}

double waist_over_wavelength(double eta) {
  if (!(eta > 0.0)) throw SimError(ErrorCode::ZeroEta, "eta must be > 0");
  return std::sqrt(3.0 / (8.0 * kPi * kPi * eta));
}

}  // namespace atomcorr
