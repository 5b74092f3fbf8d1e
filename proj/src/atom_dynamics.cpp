#include "atomcorr/atom_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <Eigen/LU>

#include "atomcorr/errors.hpp"

namespace atomcorr {

namespace {

constexpr double kMaxStepRate = 0.1;
constexpr double kDefaultStepRate = 0.01;
constexpr double kWeakDriveWarn = 0.1;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const Eigen::Matrix2cd& m) {
  DensityMatrix rho;
  rho.gg = m(0, 0).real();
  rho.ee = m(1, 1).real();
  rho.eg = 0.5 * (m(1, 0) + std::conj(m(0, 1)));
  return rho;
}

Eigen::Matrix2cd DensityMatrix::matrix() const {
  Eigen::Matrix2cd m;
  m << cplx(gg, 0.0), ge(), eg, cplx(ee, 0.0);
  return m;
}

double DensityMatrix::min_eigenvalue() const {
  const double half_diff = 0.5 * (ee - gg);
  return 0.5 * trace() - std::sqrt(half_diff * half_diff + std::norm(eg));
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
  // the off-diagonal pair contributes |eg| twice; once is enough
  return std::max({std::abs(a.ee - b.ee), std::abs(a.gg - b.gg), std::abs(a.eg - b.eg)});
}

void DriveConfig::validate() const {
  if (!finite(gamma0) || gamma0 <= 0.0)
    throw SimError(ErrorCode::InvalidArgument, "gamma0 must be finite and > 0");
  if (!finite(delta)) throw SimError(ErrorCode::InvalidArgument, "delta must be finite");
  if (!finite(omega_probe) || omega_probe < 0.0)
    throw SimError(ErrorCode::InvalidArgument, "omega_probe must be finite and >= 0");
  if (!finite(omega_pump_mag) || omega_pump_mag < 0.0)
    throw SimError(ErrorCode::InvalidArgument, "omega_pump_mag must be finite and >= 0");
  if (!finite(omega_pump_phase))
    throw SimError(ErrorCode::InvalidArgument, "omega_pump_phase must be finite");
  if (!finite(eta) || eta < 0.0 || eta > 1.0)
    throw SimError(ErrorCode::InvalidArgument, "eta must lie in [0, 1]");
}

DensityMatrix liouvillian_apply(const DensityMatrix& rho, const DriveConfig& cfg) {
  const cplx omega = cfg.rabi();
  const cplx i{0.0, 1.0};
  const double gamma = cfg.gamma0;

  DensityMatrix d;
  // i(Omega rho_ge - Omega* rho_eg) = -2 Im(Omega rho_ge)
  const double pump = -2.0 * std::imag(omega * rho.ge());
  d.ee = pump - gamma * rho.ee;
  d.gg = -pump + gamma * rho.ee;
  d.eg = i * omega * (rho.gg - rho.ee) + (i * cfg.delta - 0.5 * gamma) * rho.eg;
  return d;
}

DensityMatrix steady_state_exact(const DriveConfig& cfg) {
  cfg.validate();
  const cplx omega = cfg.rabi();
  const double a = omega.real();
  const double b = omega.imag();
  const double gamma = cfg.gamma0;
  const double delta = cfg.delta;

  // unknowns (rho_ee, Re rho_eg, Im rho_eg) with rho_gg = 1 - rho_ee
  Eigen::Matrix3d m;
  m << -gamma, -2.0 * b, 2.0 * a,
       2.0 * b, -0.5 * gamma, -delta,
       -2.0 * a, delta, -0.5 * gamma;
  const Eigen::Vector3d rhs(0.0, b, -a);

  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible())
    throw SimError(ErrorCode::SingularSystem, "Bloch steady-state system is singular");
  const Eigen::Vector3d x = lu.solve(rhs);

  DensityMatrix rho;
  rho.ee = x(0);
  rho.gg = 1.0 - x(0);
  rho.eg = cplx(x(1), x(2));
  return rho;
}

DensityMatrix steady_state_weak(const DriveConfig& cfg) {
  cfg.validate();
  const cplx omega = cfg.rabi();
  if (std::abs(omega) > kWeakDriveWarn * cfg.gamma0) {
    std::cerr << "warning: weak-drive steady state used at |Omega| = " << std::abs(omega)
              << " > " << kWeakDriveWarn << " Gamma0\n";
  }
  const cplx i{0.0, 1.0};
  DensityMatrix rho;
  rho.eg = (2.0 * i * omega / cfg.gamma0) / (1.0 - 2.0 * i * cfg.delta / cfg.gamma0);
  rho.ee = std::norm(rho.eg);
  rho.gg = 1.0 - rho.ee;
  return rho;
}

double fastest_rate(const DriveConfig& cfg) {
  return std::max({cfg.gamma0, std::abs(cfg.rabi()), std::abs(cfg.delta)});
}

double default_step(const DriveConfig& cfg) { return kDefaultStepRate / fastest_rate(cfg); }

DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& cfg, double t, double dt) {
  cfg.validate();
  if (!(t >= 0.0) || !std::isfinite(t))
    throw SimError(ErrorCode::InvalidArgument, "evolution time must be finite and >= 0");
  if (!(dt > 0.0)) throw SimError(ErrorCode::InvalidArgument, "time step must be > 0");
  if (dt * fastest_rate(cfg) > kMaxStepRate)
    throw SimError(ErrorCode::StepTooLarge,
                   "dt * max(Gamma0, |Omega|, |Delta|) = " + std::to_string(dt * fastest_rate(cfg)) +
                       " exceeds 0.1");
  if (t == 0.0) return rho0;

  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(std::max(1L, steps));

  DensityMatrix rho = rho0;
  for (long n = 0; n < std::max(1L, steps); ++n) {
    const DensityMatrix k1 = liouvillian_apply(rho, cfg);
    const DensityMatrix k2 = liouvillian_apply(rho + (0.5 * h) * k1, cfg);
    const DensityMatrix k3 = liouvillian_apply(rho + (0.5 * h) * k2, cfg);
    const DensityMatrix k4 = liouvillian_apply(rho + h * k3, cfg);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& cfg, double t) {
  return evolve(rho0, cfg, t, default_step(cfg));
}

}  // namespace atomcorr
