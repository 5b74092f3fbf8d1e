#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "atomcorr/atom_dynamics.hpp"

namespace atomcorr {

/// Detected-field operator E = alpha * 1 + i sqrt(eta Gamma0) sigma_ge, with the
/// input probe replaced by its coherent amplitude alpha = sqrt(Phi_p).
/// Expectation values of E^dagger E are photons per unit time.
struct DetectionOperator {
  double alpha = 0.0;
  double coupling = 0.0;  // sqrt(eta Gamma0)

  static DetectionOperator from_config(const DriveConfig& cfg);

  Eigen::Matrix2cd matrix() const;

  /// Tr(E^dagger E rho), the detected photon rate for state rho.
  double intensity(const DensityMatrix& rho) const;

  /// Tr(E rho) = alpha + i sqrt(eta Gamma0) rho_eg, the mean detected amplitude.
  cplx amplitude(const DensityMatrix& rho) const;
};

/// Pump-enhanced coupling Lambda = eta * Omega / Omega_probe.
struct EffectiveCoupling {
  cplx value;

  bool is_real(double tol = 1e-12) const { return std::abs(value.imag()) <= tol * std::max(1.0, std::abs(value)); }
};

/// Probe photon flux Phi_p = Omega_probe^2 / (eta Gamma0). Throws ZeroEta for eta = 0.
double probe_flux(const DriveConfig& cfg);

/// Throws ZeroProbe for Omega_probe = 0.
EffectiveCoupling effective_lambda(const DriveConfig& cfg);

/// Builds a resonant-phase drive with the requested Lambda. Lambda >= eta uses a
/// pump in phase with the probe, Lambda < eta a pump in antiphase.
DriveConfig drive_for_lambda(double eta, double lambda, double omega_probe, double delta = 0.0,
                             double gamma0 = 1.0);

/// Weak-drive transmission |1 - 2 Lambda / (1 - 2i Delta / Gamma0)|^2.
double transmission_weak(const DriveConfig& cfg);

/// Transmission <E^dagger E> / Phi_p with the exact (saturating) steady state.
double transmission_exact(const DriveConfig& cfg);

struct SpectrumTrace {
  std::vector<double> deltas;
  std::vector<double> weak;
  std::optional<std::vector<double>> exact;
};

/// Transmission versus detuning; cfg.delta is ignored. Points are independent
/// and the output keeps the order of `deltas`.
SpectrumTrace transmission_spectrum(const DriveConfig& cfg, std::span<const double> deltas,
                                    bool with_exact = false);

}  // namespace atomcorr
