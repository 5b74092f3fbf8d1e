#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace atomcorr {

enum class OutputKind { Spectrum, G2Trace, G2ZeroMap };
enum class MethodSelection { Analytic, Numeric, Both };

/// One validated figure-data job. Every axis is swept as a Cartesian product,
/// outermost first: eta, pump_ratio, pump_phase, detuning (then tau for traces).
struct Scenario {
  OutputKind output = OutputKind::Spectrum;
  MethodSelection method = MethodSelection::Analytic;
  double gamma0 = 1.0;
  std::optional<double> gamma0_si;  // label only; all rates are in units of gamma0
  double omega_probe = 0.0;
  std::vector<double> eta;
  std::vector<double> pump_ratio;  // |Omega_pump / Omega_probe|
  std::vector<double> pump_phase;  // radians
  std::vector<double> detuning;
  std::vector<double> tau;
  double saturation_threshold = 10.0;
  nlohmann::json source;  // the config as read, echoed into the output
};

/// Rejected configuration; each entry reads "<key>: <problem>".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// All problems found in a parsed config, empty when it is valid.
std::vector<std::string> check_config(const nlohmann::json& config);

/// Throws ConfigError listing every violation.
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::filesystem::path& path);

/// Reads and checks a config file without running it. Unreadable or
/// unparsable files come back as a single violation.
std::vector<std::string> validate_config(const std::filesystem::path& path);

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
};

struct RunOptions {
  unsigned threads = 1;
  std::optional<MethodSelection> method;  // overrides the config
};

/// Evaluates a scenario. Sweep points run on `threads` workers; rows come back
/// in grid order regardless. Module errors are rethrown as SimError with the
/// failing grid point prepended; a non-finite value is reported the same way.
ResultTable run(const Scenario& scenario, const RunOptions& opts = {});

/// CSV with '#'-prefixed "key: value" metadata lines before the header row.
void write_csv(std::ostream& out, const ResultTable& table);

/// load_scenario + run + write_csv into <out_dir>/<config stem>.csv.
std::filesystem::path run_scenario(const std::filesystem::path& config,
                                   const std::filesystem::path& out_dir, const RunOptions& opts = {});

MethodSelection parse_method(const std::string& name);  // throws ConfigError
const char* to_string(OutputKind kind);
const char* to_string(MethodSelection method);

}  // namespace atomcorr
