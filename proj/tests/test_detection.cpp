#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "atomcorr/detection.hpp"
#include "atomcorr/errors.hpp"
#include "test_support.hpp"

using namespace atomcorr;
using atomcorr::testing::Gen;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.code();
  }
  FAIL("expected a SimError");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("probe_flux") {
  DriveConfig cfg;
  cfg.eta = 0.05;
  cfg.omega_probe = 0.0;
  CHECK(probe_flux(cfg) == 0.0);

  cfg.omega_probe = 1e-3;
  CHECK(probe_flux(cfg) == doctest::Approx(2e-5).epsilon(1e-14));

  cfg.eta = 0.5;
  cfg.omega_probe = 0.1;
  CHECK(probe_flux(cfg) == doctest::Approx(0.02).epsilon(1e-14));

  cfg.eta = 0.0;
  CHECK(code_of([&] { probe_flux(cfg); }) == ErrorCode::ZeroEta);
}

TEST_CASE("DetectionOperator invariants") {
  Gen gen(21);
  for (int n = 0; n < 100; ++n) {
    const DriveConfig cfg = gen.drive();
    const DetectionOperator det = DetectionOperator::from_config(cfg);
    CHECK(det.alpha * det.alpha * cfg.eta * cfg.gamma0 == doctest::Approx(cfg.omega_probe * cfg.omega_probe));
    CHECK(det.coupling * det.coupling == doctest::Approx(cfg.eta * cfg.gamma0));

    // intensity and amplitude against the explicit operator products
    const DensityMatrix rho = gen.state();
    const Eigen::Matrix2cd e = det.matrix();
    const Eigen::Matrix2cd r = rho.matrix();
    CHECK(det.intensity(rho) == doctest::Approx((e.adjoint() * e * r).trace().real()));
    CHECK(std::abs(det.amplitude(rho) - (e * r).trace()) < 1e-12);
  }
}

TEST_CASE("effective_lambda") {
  DriveConfig cfg;
  cfg.eta = 0.05;
  cfg.omega_probe = 1e-3;
  CHECK(effective_lambda(cfg).value == cplx(0.05, 0.0));

  cfg.omega_pump_mag = 9e-3;
  CHECK(std::abs(effective_lambda(cfg).value - 0.5) < 1e-15);

  cfg.omega_pump_mag = 1e-3;
  cfg.omega_pump_phase = std::numbers::pi;
  CHECK(std::abs(effective_lambda(cfg).value) < 1e-17);

  cfg.omega_probe = 0.0;
  CHECK(code_of([&] { effective_lambda(cfg); }) == ErrorCode::ZeroProbe);
}

TEST_CASE("effective_lambda depends only on eta, ratio and phase") {
  Gen gen(22);
  for (int n = 0; n < 100; ++n) {
    DriveConfig cfg = gen.drive();
    const cplx base = effective_lambda(cfg).value;
    const double s = gen.log_uniform(1e-3, 1e3);
    cfg.omega_probe *= s;
    cfg.omega_pump_mag *= s;
    CHECK(std::abs(effective_lambda(cfg).value - base) < 1e-13 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("drive_for_lambda hits the requested coupling") {
  for (double eta : {0.05, 0.5, 1.0}) {
    for (double lambda : {0.0, 0.05, 0.25, 0.5, 1.1, 10.0}) {
      const DriveConfig cfg = drive_for_lambda(eta, lambda, 1e-3);
      CHECK(std::abs(effective_lambda(cfg).value - lambda) < 1e-12 * std::max(1.0, lambda));
      CHECK(cfg.omega_probe == 1e-3);
    }
  }
}

TEST_CASE("transmission_weak: resonant values") {
  CHECK(transmission_weak(drive_for_lambda(0.05, 0.05, 1e-3)) == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(transmission_weak(drive_for_lambda(0.05, 0.5, 1e-3)) < 1e-12);
  CHECK(std::abs(transmission_weak(drive_for_lambda(0.05, 1.1, 1e-3)) - 1.44) < 1e-12);
  CHECK(transmission_weak(drive_for_lambda(0.05, 0.25, 1e-3)) == doctest::Approx(0.25));
  for (double delta : {-4.0, 0.0, 0.3, 17.0})
    CHECK(transmission_weak(drive_for_lambda(0.05, 0.0, 1e-3, delta)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("transmission_weak: no-pump value |1 - 2 eta|^2") {
  for (double eta : {0.01, 0.05, 0.2, 0.5, 0.9}) {
    DriveConfig cfg;
    cfg.eta = eta;
    cfg.omega_probe = 1e-4;
    CHECK(transmission_weak(cfg) == doctest::Approx((1 - 2 * eta) * (1 - 2 * eta)));
  }
}

TEST_CASE("transmission_weak is invariant under common probe/pump scaling") {
  Gen gen(23);
  for (int n = 0; n < 100; ++n) {
    DriveConfig cfg = gen.drive();
    const double base = transmission_weak(cfg);
    const double s = gen.log_uniform(1e-4, 1e4);
    cfg.omega_probe *= s;
    cfg.omega_pump_mag *= s;
    CHECK(transmission_weak(cfg) == doctest::Approx(base).epsilon(1e-12));
    CHECK(base >= 0.0);
  }
}

TEST_CASE("transmission_exact: examples") {
  SUBCASE("weak drive converges to the closed form") {
    // Omega total 1e-4 with Lambda = 0.05 (eta = 0.05, no pump)
    const DriveConfig cfg = drive_for_lambda(0.05, 0.05, 1e-4);
    CHECK(std::abs(transmission_exact(cfg) - transmission_weak(cfg)) < 1e-6);
  }
  SUBCASE("extinction survives at weak drive up to saturation") {
    // total drive Lambda Omega_p / eta = 1e-3, residual s / (1 + s) with s = 8 |Omega|^2
    const double s = 8e-6;
    CHECK(transmission_exact(drive_for_lambda(0.05, 0.5, 1e-4)) == doctest::Approx(s / (1 + s)).epsilon(1e-9));
    // eta = 0.5 without pump: total drive 1e-4 and the residual drops below 1e-6
    CHECK(transmission_exact(drive_for_lambda(0.5, 0.5, 1e-4)) < 1e-6);
  }
  SUBCASE("saturation lifts the extinction") {
    CHECK(transmission_exact(drive_for_lambda(0.05, 0.5, 1.0)) > 0.0);
    // closed form of the saturated value: s / (1 + s), s = 8 |Omega|^2 / Gamma0^2
    const double s = 8.0 * 100.0;
    CHECK(transmission_exact(drive_for_lambda(0.05, 0.5, 1.0)) == doctest::Approx(s / (1 + s)));
  }
  SUBCASE("zero probe is an error") {
    DriveConfig cfg;
    cfg.eta = 0.1;
    CHECK(code_of([&] { transmission_exact(cfg); }) == ErrorCode::ZeroProbe);
  }
}

TEST_CASE("transmission_exact - transmission_weak is second order in Omega") {
  for (double lambda : {0.05, 0.3, 1.1}) {
    for (double delta : {0.0, 0.8}) {
      std::vector<double> ratios;
      for (double omega : {1e-2, 1e-3, 1e-4}) {
        const DriveConfig cfg = drive_for_lambda(0.05, lambda, omega * 0.05 / lambda, delta);
        const double total = std::abs(cfg.rabi());
        ratios.push_back(std::abs(transmission_exact(cfg) - transmission_weak(cfg)) / (total * total));
      }
      CAPTURE(lambda);
      CAPTURE(delta);
      CHECK(ratios[0] < 100.0);
      CHECK(ratios[2] == doctest::Approx(ratios[1]).epsilon(0.01));
    }
  }
}

TEST_CASE("transmission_spectrum") {
  std::vector<double> deltas;
  for (int k = 0; k <= 200; ++k) deltas.push_back(-5.0 + 10.0 * k / 200.0);

  SUBCASE("no pump, eta = 0.05: minimum 0.81 on resonance") {
    const SpectrumTrace s = transmission_spectrum(drive_for_lambda(0.05, 0.05, 1e-4), deltas, true);
    const auto it = std::min_element(s.weak.begin(), s.weak.end());
    CHECK(s.deltas[static_cast<std::size_t>(it - s.weak.begin())] == 0.0);
    CHECK(*it == doctest::Approx(0.81));
    REQUIRE(s.exact);
    for (std::size_t k = 0; k < deltas.size(); ++k) CHECK(std::abs((*s.exact)[k] - s.weak[k]) < 1e-6);
  }
  SUBCASE("Lambda = 0.5: full extinction at resonance") {
    const SpectrumTrace s = transmission_spectrum(drive_for_lambda(0.05, 0.5, 1e-4), deltas);
    CHECK(*std::min_element(s.weak.begin(), s.weak.end()) < 1e-12);
    CHECK(!s.exact);
  }
  SUBCASE("Lambda = 0: flat") {
    const SpectrumTrace s = transmission_spectrum(drive_for_lambda(0.05, 0.0, 1e-4), deltas);
    for (double t : s.weak) CHECK(t == doctest::Approx(1.0));
  }
  SUBCASE("symmetric for real Lambda") {
    for (double lambda : {0.05, 0.25, 0.5, 1.1, 3.0}) {
      const SpectrumTrace s = transmission_spectrum(drive_for_lambda(0.05, lambda, 1e-4), deltas);
      for (std::size_t k = 0; k < deltas.size(); ++k) CHECK(std::abs(s.weak[k] - s.weak[deltas.size() - 1 - k]) < 1e-12);
    }
  }
  SUBCASE("empty grid") {
    CHECK(code_of([&] { transmission_spectrum(drive_for_lambda(0.05, 0.05, 1e-4), {}); }) ==
          ErrorCode::InvalidArgument);
  }
}
