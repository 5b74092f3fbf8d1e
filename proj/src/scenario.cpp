#include "atomcorr/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "atomcorr/correlations.hpp"
#include "atomcorr/detection.hpp"
#include "atomcorr/errors.hpp"
#include "atomcorr/modes.hpp"

#ifndef ATOMCORR_VERSION
#define ATOMCORR_VERSION "dev"
#endif

namespace atomcorr {

namespace {

using json = nlohmann::json;
using Row = std::vector<double>;

const std::set<std::string> kKnownKeys = {"description", "output",     "method",    "gamma0_si",
                                          "omega_probe", "eta",        "pump_ratio", "pump_phase",
                                          "detuning",    "tau",        "saturation_threshold"};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += sep;
    out += parts[k];
  }
  return out;
}

std::optional<OutputKind> output_from(const std::string& s) {
  if (s == "spectrum") return OutputKind::Spectrum;
  if (s == "g2-trace") return OutputKind::G2Trace;
  if (s == "g2-zero-map") return OutputKind::G2ZeroMap;
  return std::nullopt;
}

std::optional<MethodSelection> method_from(const std::string& s) {
  if (s == "analytic") return MethodSelection::Analytic;
  if (s == "numeric") return MethodSelection::Numeric;
  if (s == "both") return MethodSelection::Both;
  return std::nullopt;
}

// A number, a list of numbers, or {start, stop, count}.
std::optional<std::vector<double>> read_axis(const json& cfg, const std::string& key,
                                             std::vector<std::string>& errors) {
  if (!cfg.contains(key)) return std::nullopt;
  const json& v = cfg.at(key);
  std::vector<double> values;
  if (v.is_number()) {
    values.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const json& item : v) {
      if (!item.is_number()) {
        errors.push_back(key + ": list entries must be numbers");
        return std::nullopt;
      }
      values.push_back(item.get<double>());
    }
  } else if (v.is_object()) {
    const bool shaped = v.size() == 3 && v.contains("start") && v.contains("stop") && v.contains("count") &&
                        v["start"].is_number() && v["stop"].is_number() && v["count"].is_number_integer();
    if (!shaped) {
      errors.push_back(key + ": grid must be {\"start\": x, \"stop\": y, \"count\": n}");
      return std::nullopt;
    }
    const auto count = v["count"].get<long long>();
    if (count < 1) {
      errors.push_back(key + ": count must be >= 1");
      return std::nullopt;
    }
    const double start = v["start"].get<double>();
    const double stop = v["stop"].get<double>();
    for (long long k = 0; k < count; ++k) {
      values.push_back(count == 1 ? start
                                  : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
  } else {
    errors.push_back(key + ": expected a number, a list, or {start, stop, count}");
    return std::nullopt;
  }
  if (values.empty()) {
    errors.push_back(key + ": grid must be non-empty");
    return std::nullopt;
  }
  if (!std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); })) {
    errors.push_back(key + ": values must be finite");
    return std::nullopt;
  }
  return values;
}

std::vector<std::string> check_into(const json& cfg, Scenario* out) {
  std::vector<std::string> errors;
  if (!cfg.is_object()) return {"config: top level must be an object"};

  for (const auto& [key, value] : cfg.items())
    if (!kKnownKeys.count(key)) errors.push_back(key + ": unknown key");

  std::optional<OutputKind> output;
  if (!cfg.contains("output")) {
    errors.push_back("output: required");
  } else if (!cfg["output"].is_string() || !(output = output_from(cfg["output"].get<std::string>()))) {
    errors.push_back("output: must be one of spectrum, g2-trace, g2-zero-map");
  }

  MethodSelection method = MethodSelection::Analytic;
  if (cfg.contains("method")) {
    const auto m = cfg["method"].is_string() ? method_from(cfg["method"].get<std::string>()) : std::nullopt;
    if (m) method = *m;
    else errors.push_back("method: must be one of analytic, numeric, both");
  }

  std::optional<double> gamma0_si;
  if (cfg.contains("gamma0_si")) {
    if (!cfg["gamma0_si"].is_number() || !(cfg["gamma0_si"].get<double>() > 0.0))
      errors.push_back("gamma0_si: must be a number > 0");
    else gamma0_si = cfg["gamma0_si"].get<double>();
  }

  double omega_probe = 0.0;
  if (!cfg.contains("omega_probe")) {
    errors.push_back("omega_probe: required");
  } else if (!cfg["omega_probe"].is_number() || !std::isfinite(cfg["omega_probe"].get<double>())) {
    errors.push_back("omega_probe: must be a finite number");
  } else {
    omega_probe = cfg["omega_probe"].get<double>();
    if (!(omega_probe > 0.0)) {
      errors.push_back("omega_probe: must be > 0; Lambda = eta Omega / Omega_probe is undefined at Omega_probe = 0" +
                       std::string(output == OutputKind::Spectrum ? "" : " so g2 cannot be normalized"));
    }
  }

  auto eta = read_axis(cfg, "eta", errors);
  if (!cfg.contains("eta")) errors.push_back("eta: required");
  if (eta && std::any_of(eta->begin(), eta->end(), [](double x) { return !(x > 0.0 && x <= 1.0); }))
    errors.push_back("eta: must be in (0,1]");

  auto ratio = read_axis(cfg, "pump_ratio", errors);
  if (ratio && std::any_of(ratio->begin(), ratio->end(), [](double x) { return x < 0.0; }))
    errors.push_back("pump_ratio: must be >= 0");

  auto phase = read_axis(cfg, "pump_phase", errors);
  auto detuning = read_axis(cfg, "detuning", errors);
  if (output == OutputKind::Spectrum && !cfg.contains("detuning"))
    errors.push_back("detuning: required for spectrum output");

  auto tau = read_axis(cfg, "tau", errors);
  if (output == OutputKind::G2Trace) {
    if (!cfg.contains("tau")) errors.push_back("tau: required for g2-trace output");
    if (tau) {
      if ((*tau)[0] < 0.0) errors.push_back("tau: delays must be >= 0");
      if (std::adjacent_find(tau->begin(), tau->end(), std::greater_equal<>()) != tau->end())
        errors.push_back("tau: delays must be strictly increasing");
    }
  } else if (output && cfg.contains("tau")) {
    errors.push_back("tau: only used by g2-trace output");
  }

  double saturation = 10.0;
  if (cfg.contains("saturation_threshold")) {
    if (!cfg["saturation_threshold"].is_number() || !(cfg["saturation_threshold"].get<double>() > 0.0))
      errors.push_back("saturation_threshold: must be a number > 0");
    else saturation = cfg["saturation_threshold"].get<double>();
  }
  if (cfg.contains("description") && !cfg["description"].is_string())
    errors.push_back("description: must be a string");

  if (errors.empty() && out != nullptr) {
    out->output = *output;
    out->method = method;
    out->gamma0 = 1.0;
    out->gamma0_si = gamma0_si;
    out->omega_probe = omega_probe;
    out->eta = *eta;
    out->pump_ratio = ratio.value_or(std::vector<double>{0.0});
    out->pump_phase = phase.value_or(std::vector<double>{0.0});
    out->detuning = detuning.value_or(std::vector<double>{0.0});
    out->tau = tau.value_or(std::vector<double>{});
    out->saturation_threshold = saturation;
    out->source = cfg;
  }
  return errors;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot read file"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
}

struct SweepPoint {
  double eta, ratio, phase, delta;
};

DriveConfig drive_at(const Scenario& sc, const SweepPoint& p) {
  DriveConfig cfg;
  cfg.gamma0 = sc.gamma0;
  cfg.eta = p.eta;
  cfg.omega_probe = sc.omega_probe;
  cfg.omega_pump_mag = p.ratio * sc.omega_probe;
  cfg.omega_pump_phase = p.phase;
  cfg.delta = p.delta;
  return cfg;
}

std::vector<SweepPoint> sweep_points(const Scenario& sc) {
  std::vector<SweepPoint> points;
  for (double eta : sc.eta)
    for (double ratio : sc.pump_ratio)
      for (double phase : sc.pump_phase)
        for (double delta : sc.detuning) points.push_back({eta, ratio, phase, delta});
  return points;
}

// Evaluates `count` units on a small worker pool. Results keep unit order and
// the lowest-index failure is the one rethrown.
std::vector<std::vector<Row>> parallel_units(std::size_t count, unsigned threads,
                                             const std::function<std::vector<Row>(std::size_t)>& unit) {
  std::vector<std::vector<Row>> results(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        results[k] = unit(k);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return results;
}

std::string describe(const SweepPoint& p) {
  return fmt::format("eta={}, pump_ratio={}, pump_phase={}, detuning={}", p.eta, p.ratio, p.phase, p.delta);
}

bool wants_analytic(MethodSelection m) { return m != MethodSelection::Numeric; }
bool wants_numeric(MethodSelection m) { return m != MethodSelection::Analytic; }

std::vector<Row> spectrum_unit(const Scenario& sc, MethodSelection method, const SweepPoint& p) {
  const DriveConfig cfg = drive_at(sc, p);
  const cplx lambda = effective_lambda(cfg).value;
  Row row{p.eta, p.ratio, p.phase, lambda.real(), lambda.imag(), p.delta};
  if (wants_analytic(method)) row.push_back(transmission_weak(cfg));
  if (wants_numeric(method)) row.push_back(transmission_exact(cfg));
  return {row};
}

std::vector<Row> trace_unit(const Scenario& sc, MethodSelection method, const SweepPoint& p) {
  const DriveConfig cfg = drive_at(sc, p);
  const EffectiveCoupling lambda = effective_lambda(cfg);

  std::vector<double> taus = sc.tau;
  std::optional<double> tau_a;
  if (lambda.is_real() && p.delta == 0.0 && std::abs(1.0 - 2.0 * lambda.value.real()) >= 1e-9)
    tau_a = antibunching_time(lambda, cfg.gamma0);
  if (tau_a && *tau_a >= taus.front() && *tau_a <= taus.back() &&
      std::find(taus.begin(), taus.end(), *tau_a) == taus.end()) {
    taus.insert(std::upper_bound(taus.begin(), taus.end(), *tau_a), *tau_a);
  }

  std::optional<CorrelationTrace> analytic, numeric;
  if (wants_analytic(method)) analytic = g2_analytic(cfg, taus);
  if (wants_numeric(method)) numeric = g2_numeric(cfg, taus);

  std::vector<Row> rows;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    Row row{p.eta, p.ratio, p.phase, lambda.value.real(), lambda.value.imag(), p.delta, taus[k],
            (tau_a && taus[k] == *tau_a) ? 1.0 : 0.0};
    if (analytic) row.push_back(analytic->values[k]);
    if (numeric) row.push_back(numeric->values[k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> zero_map_unit(const Scenario& sc, MethodSelection method, const SweepPoint& p) {
  const DriveConfig cfg = drive_at(sc, p);
  const cplx lambda = effective_lambda(cfg).value;
  const double zero[] = {0.0};
  Row row{p.eta, waist_over_wavelength(p.eta), p.ratio, p.phase, lambda.real(), lambda.imag(), p.delta};
  double flagged = 0.0;
  if (wants_analytic(method)) {
    flagged = g2_analytic(cfg, zero).values.front();
    row.push_back(flagged);
  }
  if (wants_numeric(method)) {
    const double g2 = g2_numeric(cfg, zero).values.front();
    if (!wants_analytic(method)) flagged = g2;
    row.push_back(g2);
  }
  row.push_back(flagged >= sc.saturation_threshold ? 1.0 : 0.0);
  return {row};
}

void describe_columns(const Scenario& sc, MethodSelection method, ResultTable& table) {
  auto note = [&](const std::string& column, const std::string& text) {
    table.metadata.emplace_back("column " + column, text);
  };
  switch (sc.output) {
    case OutputKind::Spectrum:
      table.columns = {"eta", "pump_ratio", "pump_phase", "lambda_re", "lambda_im", "detuning"};
      if (wants_analytic(method)) {
        table.columns.push_back("transmission_weak");
        note("transmission_weak", "analytic-weak |1 - 2 Lambda / (1 - 2i detuning)|^2");
      }
      if (wants_numeric(method)) {
        table.columns.push_back("transmission_exact");
        note("transmission_exact", "numeric exact steady state, <E^dagger E> / Phi_p");
      }
      break;
    case OutputKind::G2Trace:
      table.columns = {"eta", "pump_ratio", "pump_phase", "lambda_re", "lambda_im", "detuning", "tau", "at_tau_a"};
      note("at_tau_a", "1 on the row inserted at the anti-bunching delay tau_A");
      if (wants_analytic(method)) {
        table.columns.push_back("g2_analytic");
        note("g2_analytic", "analytic-weak closed form");
      }
      if (wants_numeric(method)) {
        table.columns.push_back("g2_numeric");
        note("g2_numeric", "numeric-regression on the exact steady state");
      }
      break;
    case OutputKind::G2ZeroMap:
      table.columns = {"eta", "waist_over_lambda", "pump_ratio", "pump_phase", "lambda_re", "lambda_im", "detuning"};
      note("waist_over_lambda", "Gaussian waist (1/e intensity radius) with eta = 3 lambda^2 / (8 pi^2 w^2)");
      if (wants_analytic(method)) {
        table.columns.push_back("g2_zero_analytic");
        note("g2_zero_analytic", "analytic-weak closed form at tau = 0");
      }
      if (wants_numeric(method)) {
        table.columns.push_back("g2_zero_numeric");
        note("g2_zero_numeric", "numeric-regression at tau = 0");
      }
      table.columns.push_back("saturated");
      note("saturated", fmt::format("1 where g2(0) >= {} ({} column)", sc.saturation_threshold,
                                    wants_analytic(method) ? "analytic" : "numeric"));
      break;
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration: " + join(violations, "; ")), violations_(std::move(violations)) {}

std::vector<std::string> check_config(const json& config) { return check_into(config, nullptr); }

Scenario parse_scenario(const json& config) {
  Scenario sc;
  auto errors = check_into(config, &sc);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_json(path)); }

std::vector<std::string> validate_config(const std::filesystem::path& path) {
  try {
    return check_config(read_json(path));
  } catch (const ConfigError& e) {
    return e.violations();
  }
}

std::size_t ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

ResultTable run(const Scenario& sc, const RunOptions& opts) {
  const MethodSelection method = opts.method.value_or(sc.method);
  ResultTable table;
  table.metadata = {
      {"generator", std::string("atomcorr ") + ATOMCORR_VERSION},
      {"output", to_string(sc.output)},
      {"method", to_string(method)},
      {"units", "omega_probe, detuning in Gamma0; tau in 1/Gamma0; pump_phase in rad"},
  };
  if (sc.gamma0_si) table.metadata.emplace_back("gamma0_si", fmt::format("{}", *sc.gamma0_si));
  table.metadata.emplace_back("omega_probe", fmt::format("{}", sc.omega_probe));
  describe_columns(sc, method, table);
  table.metadata.emplace_back("scenario", sc.source.dump());

  const std::vector<SweepPoint> points = sweep_points(sc);
  auto unit = [&](std::size_t k) -> std::vector<Row> {
    const SweepPoint& p = points[k];
    std::vector<Row> rows;
    try {
      switch (sc.output) {
        case OutputKind::Spectrum: rows = spectrum_unit(sc, method, p); break;
        case OutputKind::G2Trace: rows = trace_unit(sc, method, p); break;
        case OutputKind::G2ZeroMap: rows = zero_map_unit(sc, method, p); break;
      }
    } catch (const SimError& e) {
      throw SimError(e.code(), "at " + describe(p) + ": " + e.what());
    }
    for (const Row& row : rows)
      if (!std::all_of(row.begin(), row.end(), [](double x) { return std::isfinite(x); }))
        throw SimError(ErrorCode::InvalidArgument, "at " + describe(p) + ": non-finite result");
    return rows;
  };

  for (auto& rows : parallel_units(points.size(), opts.threads, unit))
    for (auto& row : rows) table.rows.push_back(std::move(row));
  return table;
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << ": " << value << '\n';
  out << join(table.columns, ",") << '\n';
  for (const Row& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k > 0 ? "," : "") << fmt::format("{}", row[k]);
    out << '\n';
  }
}

std::filesystem::path run_scenario(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                                   const RunOptions& opts) {
  const Scenario sc = load_scenario(config);
  const ResultTable table = run(sc, opts);
  std::filesystem::create_directories(out_dir);
  const auto target = out_dir / (config.stem().string() + ".csv");
  std::ofstream out(target, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + target.string());
  write_csv(out, table);
  if (!out) throw std::runtime_error("write failed for " + target.string());
  return target;
}

MethodSelection parse_method(const std::string& name) {
  if (auto m = method_from(name)) return *m;
  throw ConfigError({"method: must be one of analytic, numeric, both"});
}

const char* to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::Spectrum: return "spectrum";
    case OutputKind::G2Trace: return "g2-trace";
    case OutputKind::G2ZeroMap: return "g2-zero-map";
  }
  return "unknown";
}

const char* to_string(MethodSelection method) {
  switch (method) {
    case MethodSelection::Analytic: return "analytic";
    case MethodSelection::Numeric: return "numeric";
    case MethodSelection::Both: return "both";
  }
  return "unknown";
}

}  // namespace atomcorr
