#pragma once

// Run configuration and scenario dispatch for the command-line front end.
// User-facing frequencies are in Hz (Omega / 2 pi) and times in microseconds;
// everything is converted to rad/s and seconds here.

#include "majorana/errors.hpp"
#include "majorana/experiments.hpp"
#include "majorana/inference.hpp"
#include "majorana/io.hpp"
#include "majorana/waveforms.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace majorana::cli {

enum class ParamKind { Positive, NonNegative, Real, Fraction, Probability, Count, List, Choice };

struct ParamSpec {
  std::string key;
  std::string symbol;
  ParamKind kind;
  nlohmann::json fallback;
  std::vector<std::string> choices;
  std::string help;
};

inline nlohmann::json area_grid() {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 1; i <= 100; ++i) a.push_back(0.02 * i);
  return a;
}

inline const std::vector<ParamSpec>& param_specs() {
  static const std::vector<ParamSpec> specs{
      {"omega0_hz", "Ω0", ParamKind::Positive, 40e3, {}, "peak per-field Rabi frequency, Hz"},
      {"delta0_hz", "δ0", ParamKind::Positive, 60e3, {}, "initial detuning, Hz"},
      {"t_omega_us", "t_Ω", ParamKind::Positive, 200.0, {}, "amplitude ramp time, us"},
      {"t_delta_us", "t_δ", ParamKind::Positive, 300.0, {}, "detuning chirp time, us"},
      {"t_hold_us", "t_h", ParamKind::NonNegative, 400.0, {}, "hold time, us"},
      {"delta_omega_hz", "ΔΩ", ParamKind::Real, -10e3, {}, "TBB1 Rabi offset for fig3c, Hz"},
      {"rabi_mismatch", "ε", ParamKind::Fraction, 0.0, {}, "Rabi mismatch |Ω1-Ω2|/(Ω1+Ω2)"},
      {"rabi_error_hz", "ΔΩ", ParamKind::Real, 0.0, {}, "common Rabi error, Hz"},
      {"detuning_error_hz", "δ_err", ParamKind::NonNegative, 0.0, {}, "per-field detuning error, Hz"},
      {"zeeman_sigma_hz", "σ", ParamKind::NonNegative, 0.0, {}, "quasi-static Zeeman width, Hz"},
      {"noise_correlation", "", ParamKind::Choice, "per_shot", {"per_shot", "per_operation"}, "Zeeman correlation"},
      {"quadrature_nodes", "", ParamKind::Count, 7, {}, "Gauss-Hermite nodes"},
      {"static_rabi_mismatch", "ε", ParamKind::Fraction, 0.0015, {}, "static-error grid step, mismatch"},
      {"static_detuning_hz", "δ_err", ParamKind::NonNegative, 3.0, {}, "static-error grid step, Hz"},
      {"p_bright_given_1", "P(b|1)", ParamKind::Probability, 0.985, {}, "bright probability in F=1"},
      {"p_bright_given_0", "P(b|0)", ParamKind::Probability, 0.015, {}, "bright probability in F=0"},
      {"shots", "n", ParamKind::Count, 200, {}, "repetitions per point"},
      {"count_mode", "", ParamKind::Choice, "binomial", {"binomial", "expected"}, "shot statistics"},
      {"fringe_points", "", ParamKind::Count, 20, {}, "analysis phases per fringe"},
      {"method", "", ParamKind::Choice, "both", {"adiabatic", "tbb1", "both"}, "fig4c transfer method"},
      {"ns", "N", ParamKind::List, nlohmann::json::array({8, 16, 32, 64}), {}, "fig4c operation counts"},
      {"ramsey_ns", "N", ParamKind::List, nlohmann::json::array({0, 4, 8, 16, 32}), {}, "Ramsey transfer counts"},
      {"ramsey_phases", "", ParamKind::Count, 20, {}, "Ramsey analysis phases"},
      {"areas", "", ParamKind::List, area_grid(), {}, "fig3d normalised areas"},
      {"d", "d", ParamKind::Count, 5, {}, "levels for verify-reversal"},
      {"samples", "", ParamKind::Count, 500, {}, "trajectory intervals"},
      {"scan_min", "", ParamKind::Real, -4.0, {}, "fig2ab lowest δ/Ω"},
      {"scan_max", "", ParamKind::Real, 4.0, {}, "fig2ab highest δ/Ω"},
      {"scan_step", "", ParamKind::Positive, 0.01, {}, "fig2ab δ/Ω step"},
      {"integrator_tolerance", "", ParamKind::Positive, 1e-9, {}, "step-halving tolerance"},
      {"integrator_max_step_us", "", ParamKind::NonNegative, 0.0, {}, "step cap, us (0 = automatic)"},
  };
  return specs;
}

struct RunConfig {
  std::string scenario;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  std::map<std::string, nlohmann::json> params;

  double num(const std::string& key) const { return params.at(key).get<double>(); }
  double angular(const std::string& key) const { return kTwoPi * num(key); }
  double seconds(const std::string& key) const { return 1e-6 * num(key); }
  int count(const std::string& key) const { return params.at(key).get<int>(); }
  std::string choice(const std::string& key) const { return params.at(key).get<std::string>(); }
  std::vector<double> list(const std::string& key) const { return params.at(key).get<std::vector<double>>(); }

  /// Flat effective configuration; feeding it back reproduces the run.
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    j["scenario"] = scenario;
    j["seed"] = seed;
    for (const auto& [k, v] : params) j[k] = v;
    return j;
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.scenario == b.scenario && a.seed == b.seed && a.params == b.params;
  }
};

namespace detail {

inline const ParamSpec& spec_for(const std::string& key) {
  for (const auto& s : param_specs()) {
    if (s.key == key) return s;
  }
  throw ConfigError(key, "unknown configuration key '" + key + "'");
}

inline std::string name_of(const ParamSpec& s) { return s.symbol.empty() ? s.key : s.key + " (" + s.symbol + ")"; }

inline double parse_number(const ParamSpec& s, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ConfigError(s.key, name_of(s) + ": malformed number '" + text + "'");
  }
  return v;
}

/// Converts a --set string to the JSON value the key expects.
inline nlohmann::json from_text(const ParamSpec& s, const std::string& text) {
  switch (s.kind) {
    case ParamKind::Choice: return text;
    case ParamKind::List: {
      nlohmann::json a = nlohmann::json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) a.push_back(parse_number(s, item));
      return a;
    }
    default: return parse_number(s, text);
  }
}

inline nlohmann::json validated(const ParamSpec& s, const nlohmann::json& v) {
  const std::string name = name_of(s);
  auto number = [&](const nlohmann::json& x) {
    if (!x.is_number()) throw ConfigError(s.key, name + ": expected a number");
    const double d = x.get<double>();
    if (!std::isfinite(d)) throw ConfigError(s.key, name + ": must be finite");
    return d;
  };
  switch (s.kind) {
    case ParamKind::Positive:
      if (!(number(v) > 0.0)) throw ConfigError(s.key, name + " must be > 0");
      return number(v);
    case ParamKind::NonNegative:
      if (!(number(v) >= 0.0)) throw ConfigError(s.key, name + " must be >= 0");
      return number(v);
    case ParamKind::Real: return number(v);
    case ParamKind::Fraction:
      if (!(number(v) >= 0.0 && number(v) < 1.0)) throw ConfigError(s.key, name + " must lie in [0, 1)");
      return number(v);
    case ParamKind::Probability:
      if (!(number(v) >= 0.0 && number(v) <= 1.0)) throw ConfigError(s.key, name + " must lie in [0, 1]");
      return number(v);
    case ParamKind::Count: {
      const double d = number(v);
      if (!(d >= 1.0 && d == std::floor(d) && d < 1e9)) throw ConfigError(s.key, name + " must be a positive integer");
      return static_cast<int>(d);
    }
    case ParamKind::List: {
      if (!v.is_array()) throw ConfigError(s.key, name + ": expected a list of numbers");
      nlohmann::json a = nlohmann::json::array();
      for (const auto& x : v) a.push_back(number(x));
      return a;
    }
    case ParamKind::Choice: {
      if (!v.is_string()) throw ConfigError(s.key, name + ": expected a string");
      const auto str = v.get<std::string>();
      for (const auto& c : s.choices) {
        if (c == str) return str;
      }
      throw ConfigError(s.key, name + ": unknown value '" + str + "'");
    }
  }
  return v;
}

}  // namespace detail

/// Builds a validated config: defaults, then the JSON document (flat keys,
/// or a report whose "inputs" hold them), then --set overrides in order.
inline RunConfig parse_config(const nlohmann::json& doc, const std::vector<std::string>& sets = {}) {
  RunConfig c;
  for (const auto& s : param_specs()) c.params[s.key] = detail::validated(s, s.fallback);
  const nlohmann::json& flat = doc.contains("inputs") ? doc.at("inputs") : doc;
  if (!flat.is_null() && !flat.is_object()) throw ConfigError("", "configuration must be a JSON object");
  if (flat.is_object()) {
    for (const auto& [k, v] : flat.items()) {
      if (k == "scenario") {
        if (!v.is_string()) throw ConfigError(k, "scenario must be a string");
        c.scenario = v.get<std::string>();
      } else if (k == "seed") {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(k, "seed must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
      } else {
        c.params[k] = detail::validated(detail::spec_for(k), v);
      }
    }
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(kv, "override must look like key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "scenario") {
      c.scenario = value;
    } else if (key == "seed") {
      std::uint64_t s = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
      if (ec != std::errc() || ptr != value.data() + value.size()) throw ConfigError(key, "seed must be a non-negative integer");
      c.seed = s;
    } else {
      const ParamSpec& spec = detail::spec_for(key);
      c.params[key] = detail::validated(spec, detail::from_text(spec, value));
    }
  }
  if (!(c.num("t_omega_us") <= c.num("t_delta_us"))) {
    throw ConfigError("t_omega_us", "t_omega_us (t_Ω) must not exceed t_delta_us (t_δ)");
  }
  if (!(c.num("p_bright_given_0") < c.num("p_bright_given_1"))) {
    throw ConfigError("p_bright_given_0", "p_bright_given_0 (P(b|0)) must be below p_bright_given_1 (P(b|1))");
  }
  if (!(std::abs(c.num("delta_omega_hz")) < c.num("omega0_hz"))) {
    throw ConfigError("delta_omega_hz", "delta_omega_hz (ΔΩ) must be smaller in magnitude than omega0_hz (Ω0)");
  }
  if (!(std::abs(c.num("rabi_error_hz")) < c.num("omega0_hz"))) {
    throw ConfigError("rabi_error_hz", "rabi_error_hz (ΔΩ) must be smaller in magnitude than omega0_hz (Ω0)");
  }
  if (c.count("d") < 2 || c.count("d") > 8) throw ConfigError("d", "d must lie in 2..8");
  for (double n : c.list("ns")) {
    if (n < 0 || n != std::floor(n) || static_cast<long>(n) % 2 != 0) throw ConfigError("ns", "ns (N) entries must be even non-negative integers");
  }
  for (double n : c.list("ramsey_ns")) {
    if (n < 0 || n != std::floor(n) || static_cast<long>(n) % 4 != 0) {
      throw ConfigError("ramsey_ns", "ramsey_ns (N) entries must be non-negative multiples of 4");
    }
  }
  for (double a : c.list("areas")) {
    if (!(a > 0.0)) throw ConfigError("areas", "areas entries must be > 0");
  }
  return c;
}

// --- typed views ------------------------------------------------------------

inline AdiabaticParams adiabatic_params(const RunConfig& c) {
  AdiabaticParams p;
  p.omega0 = c.angular("omega0_hz");
  p.delta0 = c.angular("delta0_hz");
  p.t_omega = c.seconds("t_omega_us");
  p.t_delta = c.seconds("t_delta_us");
  p.t_hold = c.seconds("t_hold_us");
  return p;
}

inline NoiseParams noise_params(const RunConfig& c) {
  NoiseParams n;
  n.rabi_mismatch = c.num("rabi_mismatch");
  n.common_rabi_error = c.angular("rabi_error_hz");
  n.static_detuning = c.angular("detuning_error_hz");
  n.zeeman_sigma = c.angular("zeeman_sigma_hz");
  n.correlation = c.choice("noise_correlation") == "per_shot" ? NoiseCorrelation::PerShot : NoiseCorrelation::PerOperation;
  n.quadrature_nodes = c.count("quadrature_nodes");
  return n;
}

inline MeasurementModel measurement_model(const RunConfig& c) {
  MeasurementModel m;
  m.p_bright_given_1 = c.num("p_bright_given_1");
  m.p_bright_given_0 = c.num("p_bright_given_0");
  m.shots = c.count("shots");
  m.seed = c.seed;
  m.mode = c.choice("count_mode") == "binomial" ? CountMode::Binomial : CountMode::Expected;
  return m;
}

inline IntegratorConfig integrator_config(const RunConfig& c) {
  IntegratorConfig cfg;
  cfg.tolerance = c.num("integrator_tolerance");
  if (c.num("integrator_max_step_us") > 0.0) cfg.max_step = c.seconds("integrator_max_step_us");
  return cfg;
}

inline TransferSetup transfer_setup(const RunConfig& c) {
  TransferSetup s;
  s.adiabatic = adiabatic_params(c);
  s.omega0 = c.angular("omega0_hz");
  s.integrator = integrator_config(c);
  s.fringe_points = static_cast<std::size_t>(c.count("fringe_points"));
  return s;
}

// --- scenarios --------------------------------------------------------------

struct Scenario {
  std::string name;
  std::string description;
  std::function<ScenarioReport(const RunConfig&)> run;
};

namespace detail {

inline ScenarioReport fig3d(const RunConfig& c) {
  const IntegratorConfig cfg = integrator_config(c);
  const double omega0 = c.angular("omega0_hz");
  ScenarioReport r;
  r.name = "fig3d";
  const std::vector<double> flat{0.92, 0.96, 1.0, 1.04, 1.08};
  double worst[2] = {0.0, 0.0};
  for (PulseMethod m : {PulseMethod::Single, PulseMethod::Tbb1}) {
    io::CsvTable t;
    t.header = {"area", "p_F1"};
    for (const auto& pt : sweep_pulse_area(m, c.list("areas"), cfg, omega0)) t.add_row({pt.area, pt.p_f1});
    r.artifacts.push_back({to_string(m), t});
    for (const auto& pt : sweep_pulse_area(m, flat, cfg, omega0)) {
      worst[m == PulseMethod::Tbb1] = std::max(worst[m == PulseMethod::Tbb1], 1.0 - pt.fidelity);
    }
  }
  r.outputs["max_infidelity_single_0.92_1.08"] = worst[0];
  r.outputs["max_infidelity_tbb1_0.92_1.08"] = worst[1];
  r.outputs["flatness_ratio"] = worst[1] / worst[0];
  return r;
}

inline ScenarioReport fig4b(const RunConfig& c) {
  const MeasurementModel m = measurement_model(c);
  const TransferSetup setup = transfer_setup(c);
  const NoiseParams noise = noise_params(c);
  const auto [fwd, rev] = transfer_ensembles(TransferMethod::Adiabatic, noise, setup);
  const CMatrix rho = state_after_operations(fwd, rev, 0, noise.correlation);
  Rng rng(derive_seed(m.seed, 0));
  const DarkStateMeasurement meas = measure_dark_state(rho, m, rng, setup.fringe_points);
  ScenarioReport r;
  r.name = "fig4b";
  r.outputs["A0"] = meas.fit.a0;
  r.outputs["A"] = meas.fit.a;
  r.outputs["phi0"] = meas.fit.phi0;
  r.outputs["se_A0"] = meas.fit.se_a0;
  r.outputs["se_A"] = meas.fit.se_a;
  r.outputs["se_phi0"] = meas.fit.se_phi0;
  r.outputs["F_D"] = meas.fit.fd;
  r.outputs["F_D_raw"] = meas.fit.fd_raw;
  r.outputs["se_F_D"] = meas.fit.se_fd;
  r.outputs["F_D_exact"] = meas.exact_fd;
  r.artifacts.push_back({"", fringe_table(meas.data, m)});
  return r;
}

inline ScenarioReport fig4c(const RunConfig& c) {
  const MeasurementModel m = measurement_model(c);
  const TransferSetup setup = transfer_setup(c);
  const NoiseParams noise = noise_params(c);
  std::vector<int> ns;
  for (double n : c.list("ns")) ns.push_back(static_cast<int>(n));
  std::vector<TransferMethod> methods;
  if (c.choice("method") != "tbb1") methods.push_back(TransferMethod::Adiabatic);
  if (c.choice("method") != "adiabatic") methods.push_back(TransferMethod::Tbb1);
  ScenarioReport r;
  r.name = "fig4c";
  for (TransferMethod method : methods) {
    const FidelityVsN res = measure_fidelity_vs_N(method, ns, m, noise, setup);
    io::CsvTable t;
    t.header = {"N", "operations", "F_D", "F_D_raw", "se_F_D", "F_D_exact"};
    for (const auto& p : res.points) {
      t.add_row({static_cast<double>(p.n), static_cast<double>(p.operations), p.fd, p.fd_raw, p.sigma, p.exact_fd});
    }
    const std::string tag = to_string(method);
    r.artifacts.push_back({tag, t});
    r.outputs["eps_" + tag] = res.measured.epsilon;
    r.outputs["sigma_eps_" + tag] = res.measured.sigma;
    r.outputs["injected_eps_" + tag] = res.injected.epsilon;
  }
  return r;
}

inline ScenarioReport static_error(const RunConfig& c) {
  const AdiabaticParams p = adiabatic_params(c);
  const IntegratorConfig cfg = integrator_config(c);
  const double e = c.num("static_rabi_mismatch");
  const double dz = c.angular("static_detuning_hz");
  ScenarioReport r;
  r.name = "static-error";
  io::CsvTable t;
  t.header = {"rabi_mismatch", "detuning_error_hz", "infidelity"};
  for (int k = 0; k <= 4; ++k) {
    const double inf = static_error_infidelity(k * e, k * dz, p, cfg);
    t.add_row({k * e, k * dz / kTwoPi, inf});
    if (k == 0) r.outputs["infidelity_floor"] = inf;
    if (k == 1) r.outputs["infidelity"] = inf;
  }
  r.artifacts.push_back({"", t});
  return r;
}

inline ScenarioReport ramsey(const RunConfig& c) {
  const MeasurementModel m = measurement_model(c);
  const TransferSetup setup = transfer_setup(c);
  const NoiseParams noise = noise_params(c);
  const auto [fwd, rev] = transfer_ensembles(TransferMethod::Adiabatic, noise, setup);
  const std::vector<double> phases = ramsey_phases(static_cast<std::size_t>(c.count("ramsey_phases")));
  ScenarioReport r;
  r.name = "ramsey";
  io::CsvTable t;
  t.header = {"N", "contrast", "qubit_infidelity", "contrast_exact", "qubit_infidelity_exact"};
  double min_contrast = 1.0;
  double max_inf = 0.0;
  std::uint64_t index = 0;
  for (double nd : c.list("ramsey_ns")) {
    Rng rng(derive_seed(m.seed, index++));
    const RamseyResult res = ramsey_from_ensembles(static_cast<int>(nd), phases, m, fwd, rev, noise.correlation, rng);
    t.add_row({nd, res.contrast, res.qubit_infidelity, res.exact_contrast, res.exact_qubit_infidelity});
    min_contrast = std::min(min_contrast, res.contrast);
    max_inf = std::max(max_inf, res.qubit_infidelity);
  }
  r.outputs["min_contrast"] = min_contrast;
  r.outputs["max_qubit_infidelity"] = max_inf;
  r.artifacts.push_back({"", t});
  return r;
}

}  // namespace detail

inline const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all{
      {"fig2ab", "eigenvalues and eigenvectors of the static three-level Hamiltonian versus δ/Ω",
       [](const RunConfig& c) {
         return eigen_scan_report(c.angular("omega0_hz"), c.num("scan_min"), c.num("scan_max"), c.num("scan_step"));
       }},
      {"fig2e", "adiabatic round trip |0> -> |D> -> |0>, P(F=1) trajectory",
       [](const RunConfig& c) {
         return run_adiabatic_transfer(adiabatic_params(c), noise_params(c), integrator_config(c),
                                       static_cast<std::size_t>(c.count("samples")));
       }},
      {"fig3c", "TBB1 with a common Rabi-frequency offset ΔΩ, P(F=1) trajectory",
       [](const RunConfig& c) {
         return run_tbb1(c.angular("delta_omega_hz"), integrator_config(c), c.angular("omega0_hz"),
                         static_cast<std::size_t>(c.count("samples")));
       }},
      {"fig3d", "final P(F=1) versus normalised pulse area, single pulse and TBB1", detail::fig3d},
      {"fig4b", "analysis-phase fringe and maximum-likelihood fit after one adiabatic transfer", detail::fig4b},
      {"fig4c", "fitted |D> fidelity versus number of transfers, infidelity per operation", detail::fig4c},
      {"static-error", "preparation infidelity under Rabi mismatch and detuning error", detail::static_error},
      {"ramsey", "dressed-qubit Ramsey contrast with spin echo versus number of transfers", detail::ramsey},
      {"verify-reversal", "lifted π rotation reverses the level order in d levels",
       [](const RunConfig& c) { return verify_reversal(c.count("d"), integrator_config(c)); }},
      {"rotation-cycle", "four π/2 rotations about y from |0> and from |+1>",
       [](const RunConfig&) { return rotation_cycle_check(); }},
  };
  return all;
}

inline std::string list_scenarios() {
  std::ostringstream os;
  for (const auto& s : scenarios()) {
    os << s.name << std::string(s.name.size() < 16 ? 16 - s.name.size() : 1, ' ') << s.description << '\n';
  }
  return os.str();
}

/// Runs the configured scenario in memory; inputs carry the effective config.
inline ScenarioReport execute(const RunConfig& c) {
  for (const auto& s : scenarios()) {
    if (s.name == c.scenario) {
      ScenarioReport r = s.run(c);
      r.name = s.name;
      r.seed = c.seed;
      r.inputs = c.to_json();
      return r;
    }
  }
  throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");
}

inline nlohmann::json error_json(const std::string& scenario, std::uint64_t seed, const std::exception& e) {
  nlohmann::json err{{"type", "error"}, {"message", e.what()}};
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) err["key"] = ce->key();
  if (const auto* ie = dynamic_cast<const IntegratorError*>(&e)) err["residual"] = ie->residual();
  if (dynamic_cast<const ConfigError*>(&e)) err["type"] = "config";
  else if (dynamic_cast<const IntegratorError*>(&e)) err["type"] = "integrator";
  return {{"scenario", scenario}, {"seed", seed}, {"status", "error"}, {"error", err}};
}

/// Writes an error report to stderr and the output directory; returns the
/// exit status (2 for configuration errors, 1 otherwise).
inline int report_error(const RunConfig& c, const std::exception& e, std::ostream& err = std::cerr) {
  const nlohmann::json j = error_json(c.scenario, c.seed, e);
  err << j.dump() << '\n';
  try {
    const std::string name = (c.scenario.empty() ? std::string("unknown") : c.scenario) + "_" + std::to_string(c.seed) + ".json";
    io::write_atomically(c.out_dir / name, j.dump(2) + "\n");
  } catch (const std::exception&) {
  }
  return dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
}

/// Executes and writes the report; returns the process exit status.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const ScenarioReport r = execute(c);
    for (const auto& p : write_report(r, c.out_dir)) out << p.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_error(c, e, err);
  }
}

}  // namespace majorana::cli
