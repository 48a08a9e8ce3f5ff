#pragma once

// The acceptance suite: one pass/fail line per criterion.

#include "majorana/cli.hpp"
#include "majorana/dynamics.hpp"
#include "majorana/experiments.hpp"
#include "majorana/inference.hpp"
#include "majorana/spin.hpp"
#include "majorana/waveforms.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace majorana::acceptance {

/// Round-trip per-operation infidelity of the adiabatic method at the
/// default parameters.
inline constexpr double kAdiabaticPerOpInfidelity = 8.3885490156365705e-06;
inline constexpr double kFrozenRelativeTolerance = 1e-5;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline ControlSchedule random_schedule(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Segment> segs;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    ConstantSegment s;
    s.duration = 20e-6 * unit(rng);
    s.rabi_half = kTwoPi * 100e3 * unit(rng);
    s.phase = kTwoPi * unit(rng);
    s.detuning_half = kTwoPi * 100e3 * (2.0 * unit(rng) - 1.0);
    segs.emplace_back(s);
  }
  return ControlSchedule(std::move(segs));
}

inline std::pair<Complex, Complex> random_su2(Rng& rng) {
  std::normal_distribution<double> g;
  double v[4];
  double norm = 0.0;
  for (double& x : v) {
    x = g(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  return {Complex{v[0], v[1]} / norm, Complex{v[2], v[3]} / norm};
}

inline CMatrix su2(Complex a, Complex b) {
  CMatrix u(2, 2);
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

}  // namespace detail

inline CriterionResult majorana_equivalence() {
  Rng rng(derive_seed(2024, 1));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ControlSchedule s = detail::random_schedule(rng);
    const Unitary two = propagator(lift_schedule(s, 2));
    for (int d : {2, 3, 4, 5}) {
      const CMatrix full = propagator(lift_schedule(s, d)).mat();
      worst = std::max(worst, phase_insensitive_distance(full, lift_unitary(two, d).mat()));
    }
  }
  return {1, "Majorana equivalence", worst < 1e-8, "max deviation " + detail::fmt(worst)};
}

inline CriterionResult lift_homomorphism() {
  Rng rng(derive_seed(2024, 2));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto [a1, b1] = detail::random_su2(rng);
    const auto [a2, b2] = detail::random_su2(rng);
    const CMatrix u12 = detail::su2(a1, b1) * detail::su2(a2, b2);
    for (int d = 2; d <= 6; ++d) {
      const CMatrix lhs = lift_unitary(u12(0, 0), u12(1, 0), d).mat();
      const CMatrix rhs = lift_unitary(a1, b1, d).mat() * lift_unitary(a2, b2, d).mat();
      worst = std::max(worst, max_abs(lhs - rhs));
    }
  }
  const double h = 1.0 / std::sqrt(2.0);
  const Complex a{h, 0.0};
  const Complex b{h, 0.0};
  CMatrix closed(3, 3);
  closed << a * a, -a * std::conj(b) * std::sqrt(2.0), std::conj(b) * std::conj(b),  //
      a * b * std::sqrt(2.0), std::norm(a) - std::norm(b), -std::conj(a) * std::conj(b) * std::sqrt(2.0),  //
      b * b, std::conj(a) * b * std::sqrt(2.0), std::conj(a) * std::conj(a);
  const double entry = max_abs(lift_unitary(a, b, 3).mat() - closed);
  return {2, "Lift homomorphism and j=1 closed form", worst < 1e-10 && entry < 1e-12,
          "homomorphism " + detail::fmt(worst) + ", j=1 entries " + detail::fmt(entry)};
}

inline CriterionResult level_reversal() {
  double worst = 0.0;
  bool all = true;
  for (int d = 2; d <= 6; ++d) {
    const ScenarioReport r = verify_reversal(d);
    all = all && r.pass.value_or(false);
    worst = std::max(worst, r.outputs.at("max_dev"));
  }
  return {3, "Level reversal for d = 2..6 and X_a", all && worst < 1e-10, "max deviation " + detail::fmt(worst)};
}

inline CriterionResult adiabatic_transfer() {
  detail::Stopwatch sw;
  const ScenarioReport r = run_adiabatic_transfer(AdiabaticParams{}, NoiseParams{});
  const double t = sw.seconds();
  const double mid = r.outputs.at("midpoint_fidelity_D");
  const double per_op = r.outputs.at("per_op_infidelity");
  const bool frozen = std::abs(per_op - kAdiabaticPerOpInfidelity) <= kFrozenRelativeTolerance * kAdiabaticPerOpInfidelity;
  return {4, "Adiabatic transfer at default parameters", mid >= 0.999 && per_op < 1e-3 && frozen && t < 10.0,
          "mid-point fidelity " + detail::fmt(mid) + ", per-op infidelity " + detail::fmt(per_op) + " (frozen " +
              detail::fmt(kAdiabaticPerOpInfidelity) + "), " + detail::fmt(t) + " s"};
}

inline CriterionResult tbb1_transfer() {
  const double f0 = run_tbb1(0.0).outputs.at("final_fidelity_D");
  const double f25 = run_tbb1(-kTwoPi * 10e3).outputs.at("final_fidelity_D");
  return {5, "TBB1 transfer", f0 >= 1.0 - 1e-8 && f25 >= 0.99,
          "zero error " + detail::fmt(f0) + ", 25% error " + detail::fmt(f25)};
}

inline CriterionResult tbb1_flatness() {
  const std::vector<double> areas{0.92, 0.96, 1.0, 1.04, 1.08};
  double single = 0.0;
  double tbb1 = 0.0;
  for (const auto& p : sweep_pulse_area(PulseMethod::Single, areas)) single = std::max(single, 1.0 - p.fidelity);
  for (const auto& p : sweep_pulse_area(PulseMethod::Tbb1, areas)) tbb1 = std::max(tbb1, 1.0 - p.fidelity);
  return {6, "TBB1 flatness over areas 0.92-1.08", tbb1 <= 1e-2 * single,
          "max TBB1 " + detail::fmt(tbb1) + ", max single " + detail::fmt(single)};
}

inline CriterionResult static_errors() {
  const double inf = static_error_infidelity(0.0015, kTwoPi * 3.0);
  return {7, "Static Rabi mismatch and detuning error", inf < 1e-4, "infidelity " + detail::fmt(inf)};
}

inline CriterionResult chirp_identity() {
  Rng rng(derive_seed(2024, 8));
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> log_delta0(std::log(kTwoPi * 1e4), std::log(kTwoPi * 1e6));
  std::uniform_real_distribution<double> log_t_delta(std::log(10e-6), std::log(1e-3));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double delta0 = std::exp(log_delta0(rng));
    const double t_delta = std::exp(log_t_delta(rng));
    const double t = u(rng) * t_delta;
    const double h = 1e-3 * t_delta;
    auto phase = [&](double s) { return s * lab_frame_chirp(delta0, t_delta, s); };
    const double deriv = (phase(t - 2.0 * h) - 8.0 * phase(t - h) + 8.0 * phase(t + h) - phase(t + 2.0 * h)) / (12.0 * h);
    const double exact = blackman_detuning(delta0, t_delta, t);
    worst = std::max(worst, std::abs(deriv - exact) / std::abs(exact));
  }
  return {8, "Chirp identity d(Δ t)/dt = δ", worst < 1e-6, "max relative error " + detail::fmt(worst)};
}

inline CriterionResult inference_pipeline() {
  MeasurementModel m;
  m.mode = CountMode::Expected;
  Rng none(0);
  const DarkStateMeasurement d = measure_dark_state(named_state(3, "D").density(), m, none);
  const double dev = std::max({std::abs(d.fit.a0 - 0.5), std::abs(d.fit.a - 0.5), std::abs(d.fit.phi0 - kPi)});
  const double fd_dev = std::abs(d.fit.fd - 1.0);

  MeasurementModel mc;
  const std::vector<double> chis = fringe_phases(20);
  std::vector<double> p0;
  for (double chi : chis) p0.push_back(0.5 + 0.49 * std::cos(2.0 * chi + 3.1));
  int inside[3] = {0, 0, 0};
  const int runs = 500;
  for (int i = 0; i < runs; ++i) {
    Rng rng(derive_seed(mc.seed, static_cast<std::uint64_t>(i)));
    const FitResult f = ml_fit_fringe(synthesize_fringe(chis, p0, mc, rng), mc);
    inside[0] += std::abs(f.a0 - 0.5) <= 3.0 * f.se_a0;
    inside[1] += std::abs(f.a - 0.49) <= 3.0 * f.se_a;
    const double dphi = std::remainder(f.phi0 - 3.1, kTwoPi);
    inside[2] += std::abs(dphi) <= 3.0 * f.se_phi0;
  }
  const double worst = static_cast<double>(std::min({inside[0], inside[1], inside[2]})) / runs;
  return {9, "Inference pipeline", dev < 1e-6 && fd_dev < 1e-6 && worst >= 0.99,
          "noiseless parameter deviation " + detail::fmt(dev) + ", F_D deviation " + detail::fmt(fd_dev) +
              ", 3σ coverage (A0, A, φ0) " + detail::fmt(inside[0] / double(runs)) + ", " +
              detail::fmt(inside[1] / double(runs)) + ", " + detail::fmt(inside[2] / double(runs))};
}

inline CriterionResult closed_loop_epsilon() {
  const TransferSetup setup;
  NoiseParams noise;
  noise.correlation = NoiseCorrelation::PerOperation;
  noise.zeeman_sigma = calibrate_zeeman_sigma(1.4e-4, TransferMethod::Adiabatic, noise, setup);
  const double single = ensemble_transfer_infidelity(TransferMethod::Adiabatic, noise, setup);
  MeasurementModel m;
  const FidelityVsN res = measure_fidelity_vs_N(TransferMethod::Adiabatic, {8, 16, 24, 32, 40, 48, 56, 64}, m, noise, setup);
  const double dev = std::abs(res.measured.epsilon - res.injected.epsilon);
  return {10, "Closed-loop infidelity per operation", dev <= 3.0 * res.measured.sigma,
          "σ_Z/2π " + detail::fmt(noise.zeeman_sigma / kTwoPi) + " Hz, single-op infidelity " + detail::fmt(single) +
              ", injected " + detail::fmt(res.injected.epsilon) + ", fitted " + detail::fmt(res.measured.epsilon) +
              " ± " + detail::fmt(res.measured.sigma)};
}

inline CriterionResult cycles_and_gap() {
  const ScenarioReport cyc = rotation_cycle_check();
  const ScenarioReport gap = eigen_scan_report(kNominalOmega0, -4.0, 4.0, 0.01);
  const double g = gap.outputs.at("gap_at_zero_over_omega");
  const double dev = std::abs(g - 1.0 / std::sqrt(2.0));
  return {11, "Rotation cycles and avoided-crossing gap", cyc.pass.value_or(false) && dev < 1e-10,
          "cycle infidelity " + detail::fmt(cyc.outputs.at("max_infidelity")) + ", gap/Ω deviation " + detail::fmt(dev)};
}

inline CriterionResult ramsey_contrast() {
  const TransferSetup setup;
  const NoiseParams noise;
  MeasurementModel m;
  m.mode = CountMode::Expected;
  const auto [fwd, rev] = transfer_ensembles(TransferMethod::Adiabatic, noise, setup);
  const std::vector<double> phases = ramsey_phases(20);
  double worst = 0.0;
  for (int n : {0, 4, 8, 16, 32}) {
    Rng rng(derive_seed(m.seed, static_cast<std::uint64_t>(n)));
    const RamseyResult r = ramsey_from_ensembles(n, phases, m, fwd, rev, noise.correlation, rng);
    worst = std::max(worst, std::abs(r.contrast - 1.0));
  }
  return {12, "Dressed-qubit Ramsey contrast", worst < 1e-6, "max |contrast - 1| " + detail::fmt(worst)};
}

inline CriterionResult determinism() {
  std::string failed;
  for (const auto& s : cli::scenarios()) {
    cli::RunConfig c = cli::parse_config(nlohmann::json::object(), {"scenario=" + s.name, "seed=7"});
    auto render = [&c]() {
      const ScenarioReport r = cli::execute(c);
      std::string text = report_to_json(r).dump();
      for (const auto& a : r.artifacts) text += a.table.str();
      return text;
    };
    if (render() != render()) failed += (failed.empty() ? "" : ", ") + s.name;
  }
  return {13, "Determinism of every scenario", failed.empty(),
          failed.empty() ? std::to_string(cli::scenarios().size()) + " scenarios identical" : "differ: " + failed};
}

inline std::vector<std::function<CriterionResult()>> criteria() {
  return {majorana_equivalence, lift_homomorphism, level_reversal,  adiabatic_transfer, tbb1_transfer,
          tbb1_flatness,        static_errors,     chirp_identity,  inference_pipeline, closed_loop_epsilon,
          cycles_and_gap,       ramsey_contrast,   determinism};
}

/// Runs every criterion, printing one line each; returns true when all pass.
inline bool run_all(std::ostream& out) {
  bool all = true;
  int id = 0;
  for (const auto& c : criteria()) {
    ++id;
    detail::Stopwatch sw;
    CriterionResult r;
    try {
      r = c();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = sw.seconds();
    all = all && r.pass;
    out << (r.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << r.id << "] " << r.name << ": " << r.detail << " ("
        << std::fixed << std::setprecision(1) << r.seconds << " s)" << std::defaultfloat << '\n';
    out.flush();
  }
  return all;
}

}  // namespace majorana::acceptance
