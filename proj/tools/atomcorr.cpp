// atomcorr: figure-data runner for the pump-probe single-atom simulator.
//
//   atomcorr run <config.json> [--out DIR] [--threads N] [--method analytic|numeric|both]
//   atomcorr validate <config.json>
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "atomcorr/errors.hpp"
#include "atomcorr/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

void print_violations(const std::vector<std::string>& violations) {
  for (const auto& v : violations) std::cerr << "  " << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission and g2 figure data for a pump-probe driven two-level atom"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  unsigned threads = 1;
  std::string method;

  auto* run = app.add_subcommand("run", "Evaluate a scenario and write <out>/<config stem>.csv");
  run->add_option("config", config, "Scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", threads, "Worker threads for the sweep")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--method", method, "Override the config's method")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("config", config, "Scenario file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  if (validate->parsed()) {
    const auto violations = atomcorr::validate_config(config);
    if (violations.empty()) {
      std::cout << config << ": ok\n";
      return kOk;
    }
    std::cerr << config << ": " << violations.size() << " violation(s)\n";
    print_violations(violations);
    return kConfigError;
  }

  try {
    atomcorr::RunOptions opts;
    opts.threads = threads;
    if (!method.empty()) opts.method = atomcorr::parse_method(method);
    const auto written = atomcorr::run_scenario(config, out_dir, opts);
    std::cout << written.string() << '\n';
    return kOk;
  } catch (const atomcorr::ConfigError& e) {
    std::cerr << config << ": invalid configuration\n";
    print_violations(e.violations());
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << config << ": " << e.what() << '\n';
    return kNumericalError;
  }
}
