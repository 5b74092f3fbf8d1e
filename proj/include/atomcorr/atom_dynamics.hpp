#pragma once

#include <complex>

#include <Eigen/Core>

namespace atomcorr {

using cplx = std::complex<double>;

/// State of the two-level atom in the {|g>, |e>} basis.
///
/// Only the independent entries are stored: the populations are real and the
/// lower coherence is always conj(eg), so every value of this type is
/// Hermitian. The trace is not forced to one; the regression step evolves
/// unnormalized operators through the same (linear) machinery.
struct DensityMatrix {
  double ee = 0.0;
  double gg = 1.0;
  cplx eg{0.0, 0.0};  // <e|rho|g> = Tr(sigma_ge rho)

  cplx ge() const { return std::conj(eg); }
  double trace() const { return ee + gg; }

  static DensityMatrix ground() { return {0.0, 1.0, {}}; }
  static DensityMatrix excited() { return {1.0, 0.0, {}}; }

  /// Builds from a full 2x2 matrix (index 0 = g, 1 = e), keeping its Hermitian part.
  static DensityMatrix from_matrix(const Eigen::Matrix2cd& m);
  Eigen::Matrix2cd matrix() const;

  /// Smallest eigenvalue of the 2x2 matrix.
  double min_eigenvalue() const;

  DensityMatrix& operator+=(const DensityMatrix& o) {
    ee += o.ee;
    gg += o.gg;
    eg += o.eg;
    return *this;
  }
  DensityMatrix& operator*=(double s) {
    ee *= s;
    gg *= s;
    eg *= s;
    return *this;
  }
  friend DensityMatrix operator+(DensityMatrix a, const DensityMatrix& b) { return a += b; }
  friend DensityMatrix operator-(DensityMatrix a, const DensityMatrix& b) { return a += b * -1.0; }
  friend DensityMatrix operator*(DensityMatrix a, double s) { return a *= s; }
  friend DensityMatrix operator*(double s, DensityMatrix a) { return a *= s; }
};

/// Largest absolute difference over the four matrix elements.
double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b);

/// Pump-probe drive of the atom. All rates are in the same unit as gamma0
/// (the CLI works with gamma0 = 1).
struct DriveConfig {
  double gamma0 = 1.0;
  double delta = 0.0;  // probe detuning w_p - w_ge
  double omega_probe = 0.0;
  double omega_pump_mag = 0.0;
  double omega_pump_phase = 0.0;  // radians, relative to the probe
  double eta = 1.0;               // collection efficiency of the detection mode

  /// Total Rabi frequency Omega_probe + |Omega_pump| e^{i phi}.
  cplx rabi() const { return omega_probe + std::polar(omega_pump_mag, omega_pump_phase); }

  /// Throws SimError(InvalidArgument) for non-finite or out-of-range fields.
  /// eta = 0 and omega_probe = 0 are allowed here; the operations that need
  /// them non-zero raise their own typed errors.
  void validate() const;
};

/// Time derivative of rho under the master equation with
///   H = -hbar (Omega sigma_eg + Omega* sigma_ge) - hbar Delta sigma_ee
/// in the frame rotating at the probe frequency. With this sign choice the
/// weak-drive coherence is rho_eg = 2i Omega / (Gamma0 - 2i Delta).
DensityMatrix liouvillian_apply(const DensityMatrix& rho, const DriveConfig& cfg);

/// Unique stationary state, from the 3x3 real Bloch system with unit trace.
DensityMatrix steady_state_exact(const DriveConfig& cfg);

/// Lowest-order weak-drive steady state:
///   rho_eg = (2i Omega / Gamma0) / (1 - 2i Delta / Gamma0),  rho_ee = |rho_eg|^2.
/// Prints a warning to stderr when |Omega| > 0.1 Gamma0.
DensityMatrix steady_state_weak(const DriveConfig& cfg);

/// Fastest rate in the problem, max(Gamma0, |Omega|, |Delta|).
double fastest_rate(const DriveConfig& cfg);

/// Default RK4 step: 0.01 / fastest_rate(cfg).
double default_step(const DriveConfig& cfg);

/// Propagates rho0 for a duration t with classical fixed-step RK4. The step
/// actually taken is t / ceil(t / dt) <= dt, so t is hit exactly.
/// Throws StepTooLarge when dt * fastest_rate(cfg) > 0.1.
DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& cfg, double t, double dt);
DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& cfg, double t);

}  // namespace atomcorr
