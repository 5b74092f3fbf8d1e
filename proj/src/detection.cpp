#include "atomcorr/detection.hpp"

#include <cmath>
#include <numbers>

#include "atomcorr/errors.hpp"

namespace atomcorr {

namespace {

void require_probe(const DriveConfig& cfg) {
  if (cfg.omega_probe <= 0.0)
    throw SimError(ErrorCode::ZeroProbe, "Omega_probe = 0 leaves Lambda and T undefined");
}

}  // namespace

DetectionOperator DetectionOperator::from_config(const DriveConfig& cfg) {
  const double coupling = std::sqrt(cfg.eta * cfg.gamma0);
  return {std::sqrt(probe_flux(cfg)), coupling};
}

Eigen::Matrix2cd DetectionOperator::matrix() const {
  Eigen::Matrix2cd m;
  // sigma_ge = |g><e| has its only entry at (g, e) = (0, 1)
  m << cplx(alpha, 0.0), cplx(0.0, coupling), cplx(0.0, 0.0), cplx(alpha, 0.0);
  return m;
}

double DetectionOperator::intensity(const DensityMatrix& rho) const {
  // alpha^2 Tr(rho) - 2 alpha c Im(rho_eg) + c^2 rho_ee
  return alpha * alpha * rho.trace() - 2.0 * alpha * coupling * rho.eg.imag() +
         coupling * coupling * rho.ee;
}

cplx DetectionOperator::amplitude(const DensityMatrix& rho) const {
  return alpha * rho.trace() + cplx(0.0, coupling) * rho.eg;
}

double probe_flux(const DriveConfig& cfg) {
  cfg.validate();
  if (cfg.eta <= 0.0) throw SimError(ErrorCode::ZeroEta, "eta = 0 defines no detection mode");
  return cfg.omega_probe * cfg.omega_probe / (cfg.eta * cfg.gamma0);
}

EffectiveCoupling effective_lambda(const DriveConfig& cfg) {
  cfg.validate();
  require_probe(cfg);
  return {cfg.eta * cfg.rabi() / cfg.omega_probe};
}

DriveConfig drive_for_lambda(double eta, double lambda, double omega_probe, double delta,
                             double gamma0) {
  if (!(eta > 0.0)) throw SimError(ErrorCode::ZeroEta, "eta must be > 0 to target a Lambda");
  DriveConfig cfg;
  cfg.gamma0 = gamma0;
  cfg.delta = delta;
  cfg.eta = eta;
  cfg.omega_probe = omega_probe;
  const double ratio = lambda / eta - 1.0;
  cfg.omega_pump_mag = std::abs(ratio) * omega_probe;
  cfg.omega_pump_phase = ratio >= 0.0 ? 0.0 : std::numbers::pi;
  cfg.validate();
  return cfg;
}

double transmission_weak(const DriveConfig& cfg) {
  const cplx lambda = effective_lambda(cfg).value;
  const cplx lorentz = 1.0 / (1.0 - cplx(0.0, 2.0 * cfg.delta / cfg.gamma0));
  return std::norm(1.0 - 2.0 * lambda * lorentz);
}

double transmission_exact(const DriveConfig& cfg) {
  require_probe(cfg);
  const double flux = probe_flux(cfg);
  const DensityMatrix rho = steady_state_exact(cfg);
  const double coupling = std::sqrt(cfg.eta * cfg.gamma0);
  return 1.0 - 2.0 * coupling * rho.eg.imag() / std::sqrt(flux) +
         coupling * coupling * rho.ee / flux;
}

SpectrumTrace transmission_spectrum(const DriveConfig& cfg, std::span<const double> deltas,
                                    bool with_exact) {
  if (deltas.empty()) throw SimError(ErrorCode::InvalidArgument, "empty detuning grid");
  SpectrumTrace out;
  out.deltas.assign(deltas.begin(), deltas.end());
  out.weak.reserve(deltas.size());
  if (with_exact) out.exact.emplace().reserve(deltas.size());

  DriveConfig point = cfg;
  for (const double delta : deltas) {
    point.delta = delta;
    out.weak.push_back(transmission_weak(point));
    if (with_exact) out.exact->push_back(transmission_exact(point));
  }
  return out;
}

}  // namespace atomcorr
