#pragma once

#include <optional>
#include <span>
#include <vector>

#include "atomcorr/atom_dynamics.hpp"
#include "atomcorr/detection.hpp"

namespace atomcorr {

enum class CorrelationMethod { NumericRegression, AnalyticWeak };

const char* to_string(CorrelationMethod method);

/// Sampled g2(tau). taus are strictly increasing and non-negative.
struct CorrelationTrace {
  std::vector<double> taus;
  std::vector<double> values;
  CorrelationMethod method = CorrelationMethod::NumericRegression;
};

/// Atomic state right after a photocount, E rho E^dagger / Tr(E rho E^dagger).
struct ConditionalState {
  DensityMatrix rho;
  double norm = 0.0;  // Tr(E rho_ss E^dagger) = T * Phi_p
};

/// Throws ZeroIntensity when Tr(E rho E^dagger) < 1e-30.
ConditionalState collapse_state(const DensityMatrix& rho_ss, const DetectionOperator& det);

/// g2(tau) by quantum regression: collapse the exact steady state, propagate the
/// conditional state with evolve(), and compare the detected rate to T Phi_p.
/// Throws ZeroTransmission when T Phi_p < 1e-30.
CorrelationTrace g2_numeric(const DriveConfig& cfg, std::span<const double> taus);

/// Weak-drive closed form. With B = 2 Lambda L / (1 - 2 Lambda L) and
/// L = 1 / (1 - 2i Delta / Gamma0),
///   g2(tau) = |1 - B^2 exp(-(Gamma0/2 - i Delta) tau)|^2,
/// which for real Lambda on resonance is exp(-Gamma0 tau) (B^2 - exp(Gamma0 tau / 2))^2.
/// Throws LambdaHalfDivergence when |1 - 2 Lambda L| < 1e-9.
CorrelationTrace g2_analytic(const DriveConfig& cfg, std::span<const double> taus);

/// Delay of perfect anti-bunching, (4 / Gamma0) ln|2 Lambda / (2 Lambda - 1)|, for
/// real Lambda. Empty when the logarithm is negative (Lambda < 1/4).
std::optional<double> antibunching_time(const EffectiveCoupling& lambda, double gamma0 = 1.0);

/// Weak-drive coherence <g|rho'(tau)|e> after a photocount at tau = 0:
///   (-2i Omega / Gamma0) (1 + 2 Lambda / (1 - 2 Lambda) e^{-Gamma0 tau / 2})
/// for real Omega on resonance (complex conjugate of rho'_eg in general).
cplx conditional_coherence_analytic(const DriveConfig& cfg, double tau);

/// Conditional detected amplitude alpha + i sqrt(eta Gamma0) Tr(sigma_ge rho'(tau))
/// from the weak-drive coherence. Vanishes at tau = 0 for Lambda = 1/4.
cplx conditional_field_analytic(const DriveConfig& cfg, double tau);

struct BunchingPoint {
  double omega;  // |Omega|, total Rabi frequency
  double g2_zero;
};

struct BunchingScaling {
  std::vector<BunchingPoint> points;
  double slope = 0.0;      // d log g2(0) / d log |Omega|
  double prefactor = 0.0;  // C in g2(0) ~ C (Gamma0 / |Omega|)^{-slope}, from the fit intercept
};

/// Exact g2(0) as the drive is scaled down at fixed Lambda (pump and probe
/// scaled together so that |Omega| takes each value in `omegas`), with a
/// least-squares log-log slope. At Lambda = 1/2 the slope approaches -4.
BunchingScaling bunching_scaling(const DriveConfig& cfg, std::span<const double> omegas);

}  // namespace atomcorr
