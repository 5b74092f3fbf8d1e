#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "atomcorr/atom_dynamics.hpp"

namespace atomcorr::testing {

// Seeded generators for the property tests; every test owns its own engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  // Random valid density matrix: mixture of a pure state and the identity.
  DensityMatrix state() {
    const double theta = uniform(0.0, M_PI);
    const double phi = uniform(-M_PI, M_PI);
    const double purity = uniform(0.0, 1.0);
    DensityMatrix rho;
    rho.ee = purity * std::pow(std::sin(theta / 2), 2) + (1 - purity) / 2;
    rho.gg = 1.0 - rho.ee;
    rho.eg = purity * std::sin(theta / 2) * std::cos(theta / 2) * std::polar(1.0, phi);
    return rho;
  }

  // Arbitrary Hermitian, not necessarily positive or normalized.
  DensityMatrix hermitian() {
    return {uniform(-1, 1), uniform(-1, 1), {uniform(-1, 1), uniform(-1, 1)}};
  }

  DriveConfig drive(double max_rabi = 2.0) {
    DriveConfig cfg;
    cfg.delta = uniform(-3.0, 3.0);
    cfg.omega_probe = uniform(0.01, max_rabi / 2);
    cfg.omega_pump_mag = uniform(0.0, max_rabi / 2);
    cfg.omega_pump_phase = uniform(-M_PI, M_PI);
    cfg.eta = uniform(0.01, 1.0);
    return cfg;
  }

 private:
  std::mt19937_64 engine_;
};

// Textbook Bloch-equation steady state, written independently of the linear solve.
inline DensityMatrix bloch_closed_form(const DriveConfig& cfg) {
  const double g = cfg.gamma0;
  const std::complex<double> omega = cfg.rabi();
  DensityMatrix rho;
  rho.ee = std::norm(omega) / (cfg.delta * cfg.delta + g * g / 4 + 2 * std::norm(omega));
  rho.gg = 1 - rho.ee;
  rho.eg = std::complex<double>(0, 1) * omega * (1 - 2 * rho.ee) / std::complex<double>(g / 2, -cfg.delta);
  return rho;
}

// Liouvillian as a 4x4 superoperator on column-stacked rho (index 0 = g, 1 = e),
// built from the operator form of the master equation.
inline Eigen::Matrix4cd superoperator(const DriveConfig& cfg) {
  using M2 = Eigen::Matrix2cd;
  const std::complex<double> i{0, 1};
  M2 see = M2::Zero(), seg = M2::Zero(), sge = M2::Zero();
  see(1, 1) = 1;
  seg(1, 0) = 1;
  sge(0, 1) = 1;
  const std::complex<double> omega = cfg.rabi();
  const M2 h = -(omega * seg + std::conj(omega) * sge) - cfg.delta * see;
  const M2 id = M2::Identity();
  auto kron = [](const M2& a, const M2& b) {
    Eigen::Matrix4cd k;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) k.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return k;
  };
  Eigen::Matrix4cd l = -i * (kron(id, h) - kron(h.transpose(), id));
  l += cfg.gamma0 / 2 * (2 * kron(seg.transpose(), sge) - kron(id, see) - kron(see.transpose(), id));
  return l;
}

inline DensityMatrix propagate_expm(const DensityMatrix& rho, const DriveConfig& cfg, double t) {
  const Eigen::Matrix2cd m = rho.matrix();
  const Eigen::Vector4cd v(m(0, 0), m(1, 0), m(0, 1), m(1, 1));
  const Eigen::Matrix4cd lt = superoperator(cfg) * std::complex<double>(t, 0);
  const Eigen::Vector4cd out = lt.exp() * v;
  Eigen::Matrix2cd r;
  r << out(0), out(2), out(1), out(3);
  return DensityMatrix::from_matrix(r);
}

}  // namespace atomcorr::testing
