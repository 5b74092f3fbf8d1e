#include "atomcorr/correlations.hpp"

#include <cmath>
#include <string>

#include "atomcorr/errors.hpp"

namespace atomcorr {

namespace {

constexpr double kMinIntensity = 1e-30;
constexpr double kHalfTolerance = 1e-9;

void check_taus(std::span<const double> taus) {
  if (taus.empty()) throw SimError(ErrorCode::InvalidArgument, "empty delay grid");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!std::isfinite(taus[k]) || taus[k] < 0.0)
      throw SimError(ErrorCode::InvalidArgument, "delays must be finite and >= 0");
    if (k > 0 && !(taus[k] > taus[k - 1]))
      throw SimError(ErrorCode::InvalidArgument, "delays must be strictly increasing");
  }
}

cplx lorentz(const DriveConfig& cfg) { return 1.0 / (1.0 - cplx(0.0, 2.0 * cfg.delta / cfg.gamma0)); }

// B = 2 Lambda L / (1 - 2 Lambda L): relative jump of the coherence on a photocount.
cplx jump_ratio(const DriveConfig& cfg) {
  const cplx lambda_l = effective_lambda(cfg).value * lorentz(cfg);
  const cplx denom = 1.0 - 2.0 * lambda_l;
  if (std::abs(denom) < kHalfTolerance)
    throw SimError(ErrorCode::LambdaHalfDivergence,
                   "weak-drive closed form is singular at Lambda = 1/2; use bunching_scaling");
  return 2.0 * lambda_l / denom;
}

// rho'_eg(tau) = c (1 + B e^{-(Gamma0/2 - i Delta) tau}), c the steady-state coherence.
cplx conditional_eg(const DriveConfig& cfg, double tau) {
  const cplx b = jump_ratio(cfg);
  const cplx steady = cplx(0.0, 2.0) * cfg.rabi() / cfg.gamma0 * lorentz(cfg);
  const cplx decay = std::exp(-cplx(0.5 * cfg.gamma0, -cfg.delta) * tau);
  return steady * (1.0 + b * decay);
}

}  // namespace

const char* to_string(CorrelationMethod method) {
  switch (method) {
    case CorrelationMethod::NumericRegression: return "numeric-regression";
    case CorrelationMethod::AnalyticWeak: return "analytic-weak";
  }
  return "unknown";
}

ConditionalState collapse_state(const DensityMatrix& rho_ss, const DetectionOperator& det) {
  const Eigen::Matrix2cd e = det.matrix();
  const Eigen::Matrix2cd projected = e * rho_ss.matrix() * e.adjoint();
  const double norm = projected.trace().real();
  if (!(norm >= kMinIntensity))
    throw SimError(ErrorCode::ZeroIntensity,
                   "Tr(E rho E^dagger) = " + std::to_string(norm) + " leaves nothing to condition on");
  return {DensityMatrix::from_matrix(projected / norm), norm};
}

CorrelationTrace g2_numeric(const DriveConfig& cfg, std::span<const double> taus) {
  check_taus(taus);
  const DetectionOperator det = DetectionOperator::from_config(cfg);
  if (cfg.omega_probe <= 0.0)
    throw SimError(ErrorCode::ZeroProbe, "Omega_probe = 0 leaves g2 undefined");
  const DensityMatrix rho_ss = steady_state_exact(cfg);

  ConditionalState conditional;
  try {
    conditional = collapse_state(rho_ss, det);
  } catch (const SimError& e) {
    if (e.code() != ErrorCode::ZeroIntensity) throw;
    throw SimError(ErrorCode::ZeroTransmission,
                   "T * Phi_p underflows; raise Omega or use bunching_scaling near Lambda = 1/2");
  }

  CorrelationTrace trace;
  trace.method = CorrelationMethod::NumericRegression;
  trace.taus.assign(taus.begin(), taus.end());
  trace.values.reserve(taus.size());

  DensityMatrix rho = conditional.rho;
  double now = 0.0;
  for (const double tau : taus) {
    rho = evolve(rho, cfg, tau - now);
    now = tau;
    trace.values.push_back(det.intensity(rho) / conditional.norm);
  }
  return trace;
}

CorrelationTrace g2_analytic(const DriveConfig& cfg, std::span<const double> taus) {
  check_taus(taus);
  const cplx b2 = std::pow(jump_ratio(cfg), 2);
  const cplx rate{0.5 * cfg.gamma0, -cfg.delta};

  CorrelationTrace trace;
  trace.method = CorrelationMethod::AnalyticWeak;
  trace.taus.assign(taus.begin(), taus.end());
  trace.values.reserve(taus.size());
  for (const double tau : taus) trace.values.push_back(std::norm(1.0 - b2 * std::exp(-rate * tau)));
  return trace;
}

std::optional<double> antibunching_time(const EffectiveCoupling& lambda, double gamma0) {
  if (!lambda.is_real())
    throw SimError(ErrorCode::InvalidArgument, "anti-bunching time needs a real Lambda");
  const double l = lambda.value.real();
  if (std::abs(1.0 - 2.0 * l) < kHalfTolerance)
    throw SimError(ErrorCode::LambdaHalfDivergence, "no anti-bunching time at Lambda = 1/2");
  const double ratio = std::abs(2.0 * l / (2.0 * l - 1.0));
  if (!(ratio >= 1.0)) return std::nullopt;
  return 4.0 / gamma0 * std::log(ratio);
}

cplx conditional_coherence_analytic(const DriveConfig& cfg, double tau) {
  return std::conj(conditional_eg(cfg, tau));
}

cplx conditional_field_analytic(const DriveConfig& cfg, double tau) {
  const DetectionOperator det = DetectionOperator::from_config(cfg);
  return det.alpha + cplx(0.0, det.coupling) * conditional_eg(cfg, tau);
}

BunchingScaling bunching_scaling(const DriveConfig& cfg, std::span<const double> omegas) {
  if (omegas.size() < 2)
    throw SimError(ErrorCode::InvalidArgument, "bunching scaling needs at least two drive strengths");
  const double base = std::abs(cfg.rabi());
  if (!(base > 0.0)) throw SimError(ErrorCode::ZeroProbe, "configuration has no drive to rescale");

  BunchingScaling out;
  const double zero[] = {0.0};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const double omega : omegas) {
    if (!(omega > 0.0) || !std::isfinite(omega))
      throw SimError(ErrorCode::InvalidArgument, "drive strengths must be finite and > 0");
    DriveConfig scaled = cfg;
    scaled.omega_probe *= omega / base;
    scaled.omega_pump_mag *= omega / base;
    const double g2 = g2_numeric(scaled, zero).values.front();
    out.points.push_back({omega, g2});

    const double x = std::log(omega / cfg.gamma0);
    const double y = std::log(g2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto n = static_cast<double>(omegas.size());
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0))
    throw SimError(ErrorCode::InvalidArgument, "drive strengths must not all coincide");
  out.slope = (n * sxy - sx * sy) / denom;
  out.prefactor = std::exp((sy - out.slope * sx) / n);
  return out;
}

}  // namespace atomcorr
