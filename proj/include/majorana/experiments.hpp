#pragma once

// Scenario runners on the three-level V system (basis |-1>, |0>, |+1>) and
// the four-level extension with the clock state |0'> (index 3).
//
// Noise: a quasi-static Zeeman shift z enters as diag(-z, 0, +z) and is
// averaged with Gauss-Hermite quadrature over N(0, sigma^2). With per-shot
// correlation one z holds for a whole sequence; with per-operation
// correlation every transfer draws its own z, and the averaged channels are
// composed.

#include "majorana/drive.hpp"
#include "majorana/dynamics.hpp"
#include "majorana/errors.hpp"
#include "majorana/inference.hpp"
#include "majorana/io.hpp"
#include "majorana/linalg.hpp"
#include "majorana/spin.hpp"
#include "majorana/waveforms.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace majorana {

// --- noise -----------------------------------------------------------------

enum class NoiseCorrelation { PerShot, PerOperation };

inline std::string to_string(NoiseCorrelation c) {
  return c == NoiseCorrelation::PerShot ? "per_shot" : "per_operation";
}

struct NoiseParams {
  double rabi_mismatch = 0.0;      ///< |O1 - O2| / (O1 + O2); couplings scale by (1 + e, 1 - e)
  double common_rabi_error = 0.0;  ///< Delta Omega, rad/s (signed)
  double static_detuning = 0.0;    ///< delta_err per field, rad/s
  double zeeman_sigma = 0.0;       ///< rad/s
  NoiseCorrelation correlation = NoiseCorrelation::PerShot;
  int quadrature_nodes = 7;

  void validate() const {
    if (!(rabi_mismatch >= 0.0 && rabi_mismatch < 1.0)) throw InvalidArgument("NoiseParams: rabi_mismatch must lie in [0, 1)");
    if (!(static_detuning >= 0.0)) throw InvalidArgument("NoiseParams: static_detuning must be >= 0");
    if (!(zeeman_sigma >= 0.0)) throw InvalidArgument("NoiseParams: zeeman_sigma must be >= 0");
    if (!std::isfinite(common_rabi_error)) throw InvalidArgument("NoiseParams: common_rabi_error must be finite");
    if (quadrature_nodes < 1) throw InvalidArgument("NoiseParams: quadrature_nodes must be >= 1");
  }
};

struct QuadratureNode {
  double shift = 0.0;
  double weight = 1.0;
};

/// Gauss-Hermite nodes for a zero-mean Gaussian of width sigma (Golub-Welsch).
inline std::vector<QuadratureNode> gaussian_nodes(double sigma, int count) {
  if (sigma == 0.0 || count == 1) return {{0.0, 1.0}};
  RMatrix jacobi = RMatrix::Zero(count, count);
  for (int k = 1; k < count; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jacobi);
  std::vector<QuadratureNode> nodes;
  for (int i = 0; i < count; ++i) {
    const double v = es.eigenvectors()(0, i);
    nodes.push_back({sigma * es.eigenvalues()[i], v * v});
  }
  return nodes;
}

/// Three-level drive of `s` with static errors and a Zeeman shift applied.
inline MultiLevelDrive noisy_drive(const ControlSchedule& s, const NoiseParams& noise, double omega0,
                                   double zeeman_shift = 0.0) {
  DrivePerturbation pert;
  if (noise.rabi_mismatch != 0.0) pert.transition_scale = {1.0 + noise.rabi_mismatch, 1.0 - noise.rabi_mismatch};
  if (noise.static_detuning != 0.0 || zeeman_shift != 0.0) {
    pert.level_shift = {-noise.static_detuning - zeeman_shift, 0.0, -noise.static_detuning + zeeman_shift};
  }
  RabiGain gain;
  if (noise.common_rabi_error != 0.0) gain = constant_gain(1.0 + noise.common_rabi_error / omega0);
  return MultiLevelDrive(s, 3, std::move(gain), std::move(pert));
}

// --- ensembles and channels ------------------------------------------------

struct WeightedUnitary {
  double weight = 1.0;
  CMatrix u;
};

using Ensemble = std::vector<WeightedUnitary>;

/// One propagator per quadrature node.
inline Ensemble propagator_ensemble(const ControlSchedule& s, const NoiseParams& noise, double omega0,
                                    const IntegratorConfig& cfg) {
  noise.validate();
  Ensemble e;
  for (const auto& node : gaussian_nodes(noise.zeeman_sigma, noise.quadrature_nodes)) {
    e.push_back({node.weight, propagator(noisy_drive(s, noise, omega0, node.shift), cfg).mat()});
  }
  return e;
}

inline Ensemble transposed(const Ensemble& e) {
  Ensemble out = e;
  for (auto& m : out) m.u.transposeInPlace();
  return out;
}

/// Places each 3x3 member in the |-1>,|0>,|+1> block of a 4x4 identity.
inline Ensemble embed_clock(const Ensemble& e) {
  Ensemble out;
  for (const auto& m : e) {
    CMatrix u = CMatrix::Identity(4, 4);
    u.topLeftCorner(3, 3) = m.u;
    out.push_back({m.weight, u});
  }
  return out;
}

inline Ensemble fixed(const CMatrix& u) { return {{1.0, u}}; }

/// Column-stacked superoperator sum_i w_i conj(U_i) (x) U_i.
inline CMatrix superoperator(const Ensemble& e) {
  const Eigen::Index n = e.front().u.rows();
  CMatrix s = CMatrix::Zero(n * n, n * n);
  for (const auto& m : e) {
    const CMatrix c = m.u.conjugate();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) s.block(i * n, j * n, n, n) += m.weight * c(i, j) * m.u;
  }
  return s;
}

/// Applies `ops` in order to rho. Ensembles with one member are noiseless;
/// the others must share the same quadrature nodes.
inline CMatrix evolve_ensemble(const std::vector<const Ensemble*>& ops, const CMatrix& rho0, NoiseCorrelation corr) {
  const Eigen::Index n = rho0.rows();
  std::size_t members = 1;
  const Ensemble* weights = nullptr;
  for (const auto* op : ops) {
    if (op->size() > 1) {
      if (members > 1 && op->size() != members) throw DimensionMismatch("evolve_ensemble: node counts differ");
      members = op->size();
      weights = op;
    }
  }
  if (corr == NoiseCorrelation::PerShot || members == 1) {
    CMatrix rho = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < members; ++i) {
      CMatrix u = CMatrix::Identity(n, n);
      for (const auto* op : ops) u = (op->size() > 1 ? (*op)[i].u : op->front().u) * u;
      rho += (weights ? (*weights)[i].weight : 1.0) * (u * rho0 * u.adjoint());
    }
    return rho;
  }
  std::map<const Ensemble*, CMatrix> cache;
  CVector v = Eigen::Map<const CVector>(rho0.data(), n * n);
  for (const auto* op : ops) {
    auto it = cache.find(op);
    if (it == cache.end()) it = cache.emplace(op, superoperator(*op)).first;
    v = it->second * v;
  }
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

inline double dark_fidelity(const CMatrix& rho) {
  return state_fidelity(rho.topLeftCorner(3, 3).eval(), named_state(3, "D"));
}

// --- reports ---------------------------------------------------------------

struct Artifact {
  std::string tag;  ///< empty for the main CSV
  io::CsvTable table;
};

struct ScenarioReport {
  std::string name;
  nlohmann::json inputs = nlohmann::json::object();
  std::map<std::string, double> outputs;
  std::vector<Artifact> artifacts;
  std::uint64_t seed = 0;
  std::optional<bool> pass;
};

inline std::string artifact_filename(const ScenarioReport& r, const Artifact& a) {
  std::string base = r.name + "_" + std::to_string(r.seed);
  if (!a.tag.empty()) base += "_" + a.tag;
  return base + ".csv";
}

inline std::string report_filename(const ScenarioReport& r) {
  return r.name + "_" + std::to_string(r.seed) + ".json";
}

inline nlohmann::json report_to_json(const ScenarioReport& r) {
  nlohmann::json j;
  j["scenario"] = r.name;
  j["seed"] = r.seed;
  j["status"] = "ok";
  j["inputs"] = r.inputs;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : r.outputs) out[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  j["outputs"] = out;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& a : r.artifacts) files.push_back(artifact_filename(r, a));
  j["artifacts"] = files;
  if (r.pass) j["pass"] = *r.pass;
  return j;
}

/// Writes the report JSON and its CSV artifacts into `dir`.
inline std::vector<std::filesystem::path> write_report(const ScenarioReport& r, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& a : r.artifacts) {
    const auto p = dir / artifact_filename(r, a);
    io::write_atomically(p, a.table.str());
    written.push_back(p);
  }
  const auto p = dir / report_filename(r);
  io::write_atomically(p, report_to_json(r).dump(2) + "\n");
  written.push_back(p);
  return written;
}

namespace detail {

inline io::CsvTable population_table(const std::vector<double>& times, const std::vector<std::vector<double>>& pops) {
  io::CsvTable t;
  t.header = {"time_us", "p_m-1", "p_m0", "p_m+1", "p_F1"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.add_row({times[i] * 1e6, pops[i][0], pops[i][1], pops[i][2], 1.0 - pops[i][1]});
  }
  return t;
}

/// Populations and final density matrix averaged over the Zeeman nodes.
struct AveragedRun {
  std::vector<double> times;
  std::vector<std::vector<double>> populations;
  std::vector<CMatrix> rho;  ///< per sample time
};

inline AveragedRun averaged_trajectory(const ControlSchedule& s, const NoiseParams& noise, double omega0,
                                       const IntegratorConfig& cfg, std::vector<double> times) {
  noise.validate();
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  AveragedRun run;
  run.times = times;
  run.populations.assign(times.size(), std::vector<double>(3, 0.0));
  run.rho.assign(times.size(), CMatrix::Zero(3, 3));
  const StateVector psi0 = named_state(3, "0");
  for (const auto& node : gaussian_nodes(noise.zeeman_sigma, noise.quadrature_nodes)) {
    const Trajectory tr = propagate(noisy_drive(s, noise, omega0, node.shift), psi0, cfg, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto p = tr.populations(i);
      for (int k = 0; k < 3; ++k) run.populations[i][k] += node.weight * p[k];
      run.rho[i] += node.weight * tr.states[i].density();
    }
  }
  return run;
}

inline std::size_t index_of(const std::vector<double>& times, double t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

}  // namespace detail

// --- adiabatic transfer ----------------------------------------------------

/// Round trip |0> -> |D> (hold) -> |0>. The mid-point is the centre of the hold.
inline ScenarioReport run_adiabatic_transfer(AdiabaticParams p, const NoiseParams& noise,
                                             const IntegratorConfig& cfg = {}, std::size_t intervals = 500) {
  p.direction = Direction::RoundTrip;
  p.validate();
  const ControlSchedule s = adiabatic_method(p);
  const double t_mid = p.t_delta + 0.5 * p.t_hold;
  std::vector<double> times = uniform_times(s.total_duration(), intervals);
  times.push_back(t_mid);
  const detail::AveragedRun run = detail::averaged_trajectory(s, noise, p.omega0, cfg, times);

  const std::size_t mid = detail::index_of(run.times, t_mid);
  const double f_mid = dark_fidelity(run.rho[mid]);
  const double f_end = run.populations.back()[1];

  ScenarioReport r;
  r.name = "fig2e";
  r.outputs["midpoint_fidelity_D"] = f_mid;
  r.outputs["midpoint_infidelity_D"] = 1.0 - f_mid;
  r.outputs["final_fidelity_0"] = f_end;
  r.outputs["round_trip_infidelity"] = 1.0 - f_end;
  r.outputs["per_op_infidelity"] = 0.5 * (1.0 - f_end);
  r.outputs["final_p_F1"] = 1.0 - run.populations.back()[1];
  r.outputs["duration_us"] = s.total_duration() * 1e6;
  r.artifacts.push_back({"", detail::population_table(run.times, run.populations)});
  return r;
}

/// Single forward ramp (no hold) from |0>; returns 1 - |<D|psi>|^2.
inline double static_error_infidelity(double rabi_mismatch, double static_detuning, AdiabaticParams p = {},
                                      const IntegratorConfig& cfg = {}) {
  p.direction = Direction::Forward;
  p.t_hold = 0.0;
  NoiseParams noise;
  noise.rabi_mismatch = rabi_mismatch;
  noise.static_detuning = static_detuning;
  noise.validate();
  const Unitary u = propagator(noisy_drive(adiabatic_method(p), noise, p.omega0), cfg);
  return 1.0 - state_fidelity(u.apply(named_state(3, "0")), named_state(3, "D"));
}

// --- TBB1 ------------------------------------------------------------------

inline constexpr double kNominalOmega0 = kTwoPi * 40e3;

/// TBB1 with every Rabi frequency offset by delta_omega.
inline ScenarioReport run_tbb1(double delta_omega, const IntegratorConfig& cfg = {}, double omega0 = kNominalOmega0,
                               std::size_t intervals = 400) {
  if (!(std::abs(delta_omega) < omega0)) throw InvalidArgument("run_tbb1: require |delta_omega| < omega0");
  const ControlSchedule s = composite_method(tbb1_sequence(), omega0);
  NoiseParams noise;
  noise.common_rabi_error = delta_omega;
  const detail::AveragedRun run =
      detail::averaged_trajectory(s, noise, omega0, cfg, uniform_times(s.total_duration(), intervals));
  const double f = dark_fidelity(run.rho.back());
  ScenarioReport r;
  r.name = "fig3c";
  r.outputs["final_fidelity_D"] = f;
  r.outputs["final_infidelity_D"] = 1.0 - f;
  r.outputs["final_p_F1"] = 1.0 - run.populations.back()[1];
  r.outputs["duration_us"] = s.total_duration() * 1e6;
  r.artifacts.push_back({"", detail::population_table(run.times, run.populations)});
  return r;
}

// --- pulse-area sweep ------------------------------------------------------

enum class PulseMethod { Single, Tbb1 };

inline std::string to_string(PulseMethod m) { return m == PulseMethod::Single ? "single" : "tbb1"; }

struct AreaPoint {
  double area = 0.0;
  double p_f1 = 0.0;
  double fidelity = 0.0;
};

/// Scales every pulse duration by the normalised area (area 1 = nominal).
inline std::vector<AreaPoint> sweep_pulse_area(PulseMethod method, const std::vector<double>& areas,
                                               const IntegratorConfig& cfg = {}, double omega0 = kNominalOmega0) {
  const ControlSchedule nominal = method == PulseMethod::Single ? square_pulse(kPi / 2.0, kPi / 2.0, omega0)
                                                                : composite_method(tbb1_sequence(), omega0);
  const StateVector psi0 = named_state(3, "0");
  std::vector<AreaPoint> out;
  for (double a : areas) {
    if (!(a > 0.0)) throw InvalidArgument("sweep_pulse_area: areas must be > 0");
    const StateVector psi = propagator(lift_schedule(scale_durations(nominal, a), 3), cfg).apply(psi0);
    out.push_back({a, 1.0 - std::norm(psi[1]), state_fidelity(psi, named_state(3, "D"))});
  }
  return out;
}

// --- fringe measurement ----------------------------------------------------

struct DarkStateMeasurement {
  FringeData data;
  FitResult fit;
  std::vector<double> p0;  ///< exact P_0 per phase
  double exact_fd = 0.0;
};

/// Analysis-pulse fringe of rho, sampled with `m` and fitted.
inline DarkStateMeasurement measure_dark_state(const CMatrix& rho, const MeasurementModel& m, Rng& rng,
                                               std::size_t points = 20) {
  DarkStateMeasurement out;
  const std::vector<double> chis = fringe_phases(points);
  for (double chi : chis) out.p0.push_back(fringe_prediction(rho, chi));
  out.data = synthesize_fringe(chis, out.p0, m, rng);
  out.fit = ml_fit_fringe(out.data, m);
  out.exact_fd = dark_fidelity(rho);
  return out;
}

// --- fidelity versus number of operations ----------------------------------

enum class TransferMethod { Adiabatic, Tbb1 };

inline std::string to_string(TransferMethod m) { return m == TransferMethod::Adiabatic ? "adiabatic" : "tbb1"; }

struct TransferSetup {
  AdiabaticParams adiabatic;  ///< hold and direction are overridden per operation
  double omega0 = kNominalOmega0;  ///< composite-pulse Rabi frequency
  IntegratorConfig integrator;
  std::size_t fringe_points = 20;
};

/// Forward (|0> -> |D>) and reverse operation ensembles.
inline std::pair<Ensemble, Ensemble> transfer_ensembles(TransferMethod method, const NoiseParams& noise,
                                                        const TransferSetup& setup) {
  if (method == TransferMethod::Adiabatic) {
    AdiabaticParams p = setup.adiabatic;
    p.t_hold = 0.0;
    p.direction = Direction::Forward;
    Ensemble fwd = propagator_ensemble(adiabatic_method(p), noise, p.omega0, setup.integrator);
    // chi = 0 keeps H(t) real symmetric, so the mirrored ramp propagates with U^T.
    Ensemble rev = transposed(fwd);
    return {std::move(fwd), std::move(rev)};
  }
  const CompositeSequence seq = tbb1_sequence();
  return {propagator_ensemble(composite_method(seq, setup.omega0), noise, setup.omega0, setup.integrator),
          propagator_ensemble(composite_method(seq.inverse(), setup.omega0), noise, setup.omega0, setup.integrator)};
}

/// Density matrix after forward, then N/2 (reverse, forward) pairs.
inline CMatrix state_after_operations(const Ensemble& fwd, const Ensemble& rev, int n, NoiseCorrelation corr) {
  std::vector<const Ensemble*> ops{&fwd};
  for (int k = 0; k < n / 2; ++k) {
    ops.push_back(&rev);
    ops.push_back(&fwd);
  }
  return evolve_ensemble(ops, named_state(3, "0").density(), corr);
}

struct FidelityVsNPoint {
  int n = 0;
  int operations = 0;
  double fd = 0.0;
  double fd_raw = 0.0;
  double sigma = 0.0;
  double exact_fd = 0.0;
  FitResult fit;
};

struct FidelityVsN {
  TransferMethod method = TransferMethod::Adiabatic;
  std::vector<FidelityVsNPoint> points;
  InfidelityRate measured;
  InfidelityRate injected;  ///< same fit applied to the exact ensemble fidelities
};

/// For each N: forward, N/2 (reverse, forward) pairs, fringe measurement and
/// fit; then F = 1 - x eps with x = N + 1 operations.
inline FidelityVsN measure_fidelity_vs_N(TransferMethod method, const std::vector<int>& ns, const MeasurementModel& m,
                                         const NoiseParams& noise, const TransferSetup& setup = {}) {
  m.validate();
  for (int n : ns) {
    if (n < 0 || n % 2 != 0) throw InvalidArgument("measure_fidelity_vs_N: N must be even and >= 0");
  }
  const auto [fwd, rev] = transfer_ensembles(method, noise, setup);
  FidelityVsN out;
  out.method = method;
  std::vector<FidelityPoint> measured;
  std::vector<FidelityPoint> exact;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const CMatrix rho = state_after_operations(fwd, rev, ns[i], noise.correlation);
    Rng rng(derive_seed(m.seed, i));
    const DarkStateMeasurement meas = measure_dark_state(rho, m, rng, setup.fringe_points);
    FidelityVsNPoint pt;
    pt.n = ns[i];
    pt.operations = ns[i] + 1;
    pt.fd = meas.fit.fd;
    pt.fd_raw = meas.fit.fd_raw;
    pt.sigma = meas.fit.se_fd;
    if (!(std::isfinite(pt.sigma) && pt.sigma > 0.0)) {
      pt.sigma = 1.0 / std::sqrt(static_cast<double>(m.shots) * static_cast<double>(setup.fringe_points));
    }
    pt.exact_fd = meas.exact_fd;
    pt.fit = meas.fit;
    measured.push_back({static_cast<double>(pt.operations), pt.fd_raw, pt.sigma});
    exact.push_back({static_cast<double>(pt.operations), pt.exact_fd, pt.sigma});
    out.points.push_back(pt);
  }
  out.measured = infidelity_per_op(measured);
  out.injected = infidelity_per_op(exact);
  return out;
}

/// Exact single-forward-operation infidelity averaged over the Zeeman nodes.
inline double ensemble_transfer_infidelity(TransferMethod method, const NoiseParams& noise,
                                           const TransferSetup& setup = {}) {
  const auto [fwd, rev] = transfer_ensembles(method, noise, setup);
  return 1.0 - dark_fidelity(state_after_operations(fwd, rev, 0, noise.correlation));
}

/// Zeeman width giving roughly `target` single-operation infidelity, using
/// infidelity = floor + k sigma^2 from one probe width.
inline double calibrate_zeeman_sigma(double target, TransferMethod method, NoiseParams noise,
                                     const TransferSetup& setup = {}, double probe_sigma = kTwoPi * 200.0) {
  noise.zeeman_sigma = 0.0;
  const double floor = ensemble_transfer_infidelity(method, noise, setup);
  noise.zeeman_sigma = probe_sigma;
  const double probe = ensemble_transfer_infidelity(method, noise, setup);
  if (!(target > floor && probe > floor)) throw InvalidArgument("calibrate_zeeman_sigma: target below the noiseless floor");
  return probe_sigma * std::sqrt((target - floor) / (probe - floor));
}

// --- dressed-qubit Ramsey --------------------------------------------------

/// Resonant rotation R(theta, phi) on the clock pair {|0>, |0'>} of the
/// four-level basis.
inline CMatrix clock_rotation(double theta, double phi) {
  CMatrix u = CMatrix::Identity(4, 4);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  u(1, 1) = c;
  u(3, 3) = c;
  u(1, 3) = -kI * s * std::exp(-kI * phi);
  u(3, 1) = -kI * s * std::exp(kI * phi);
  return u;
}

struct RamseyResult {
  int n = 0;
  double contrast = 0.0;          ///< A / A0 of the fitted fringe
  double qubit_infidelity = 0.0;  ///< 1 - (A0 + A)
  double exact_contrast = 0.0;
  double exact_qubit_infidelity = 0.0;
  std::vector<double> phases;
  std::vector<double> p0;
  FringeData data;
  FitResult fit;
};

/// Ramsey sequence with N/2 transfers either side of the echo; N/2 must be
/// even so the population is back in |0> when the echo is applied.
inline RamseyResult ramsey_from_ensembles(int n, const std::vector<double>& phases, const MeasurementModel& m,
                                          const Ensemble& fwd, const Ensemble& rev, NoiseCorrelation corr, Rng& rng) {
  if (n < 0 || n % 4 != 0) throw InvalidArgument("run_ramsey_dressed_qubit: N must be a non-negative multiple of 4");
  if (phases.size() < 4) throw InvalidArgument("run_ramsey_dressed_qubit: need at least 4 phases");
  const Ensemble f4 = embed_clock(fwd);
  const Ensemble r4 = embed_clock(rev);
  const Ensemble open = fixed(clock_rotation(kPi / 2.0, 0.0));
  const Ensemble echo = fixed(clock_rotation(kPi, 0.0));
  std::vector<const Ensemble*> ops{&open};
  auto transfers = [&](int count) {
    for (int k = 0; k < count; ++k) ops.push_back(k % 2 == 0 ? &f4 : &r4);
  };
  transfers(n / 2);
  ops.push_back(&echo);
  transfers(n / 2);
  CMatrix rho0 = CMatrix::Zero(4, 4);
  rho0(1, 1) = 1.0;
  const CMatrix rho = evolve_ensemble(ops, rho0, corr);

  RamseyResult out;
  out.n = n;
  out.phases = phases;
  std::vector<double> chis;
  for (double phi : phases) {
    const CMatrix u = clock_rotation(kPi / 2.0, phi);
    out.p0.push_back((u * rho * u.adjoint())(1, 1).real());
    chis.push_back(0.5 * phi);
  }
  out.data = synthesize_fringe(chis, out.p0, m, rng);
  out.fit = ml_fit_fringe(out.data, m);
  out.contrast = out.fit.a0 > 0.0 ? out.fit.a / out.fit.a0 : 0.0;
  out.qubit_infidelity = 1.0 - (out.fit.a0 + out.fit.a);

  // First harmonic of the exact curve (phases assumed evenly spread over 2 pi).
  double mean = 0.0;
  Complex h{0.0, 0.0};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    mean += out.p0[i];
    h += out.p0[i] * std::exp(kI * phases[i]);
  }
  mean /= static_cast<double>(phases.size());
  const double amp = 2.0 * std::abs(h) / static_cast<double>(phases.size());
  out.exact_contrast = amp / mean;
  out.exact_qubit_infidelity = 1.0 - (mean + amp);
  return out;
}

inline std::vector<double> ramsey_phases(std::size_t count) {
  std::vector<double> phi(count);
  for (std::size_t i = 0; i < count; ++i) phi[i] = kTwoPi * static_cast<double>(i) / count;
  return phi;
}

inline RamseyResult run_ramsey_dressed_qubit(int n, const std::vector<double>& phases, const MeasurementModel& m,
                                             const NoiseParams& noise, const TransferSetup& setup = {}) {
  m.validate();
  const auto [fwd, rev] = transfer_ensembles(TransferMethod::Adiabatic, noise, setup);
  Rng rng(derive_seed(m.seed, static_cast<std::uint64_t>(n)));
  return ramsey_from_ensembles(n, phases, m, fwd, rev, noise.correlation, rng);
}

// --- Majorana checks -------------------------------------------------------

/// i^(d+1) delta_{d+1, r+s} with 1-based r, s.
inline CMatrix reversal_target(int dim) {
  CMatrix t = CMatrix::Zero(dim, dim);
  const Complex phase = detail::ipow(kI, dim + 1);
  for (int r = 0; r < dim; ++r) t(r, dim - 1 - r) = phase;
  return t;
}

inline ScenarioReport verify_reversal(int dim, const IntegratorConfig& cfg = {}) {
  if (dim < 2 || dim > 8) throw InvalidDimension("verify_reversal: require 2 <= d <= 8");
  const CMatrix target = reversal_target(dim);
  const CMatrix lifted = lift_unitary(Complex{0.0, 0.0}, kI, dim).mat();
  const CMatrix rotated = rotation_unitary(dim, Eigen::Vector3d::UnitX(), kPi).mat();
  const CMatrix pulsed = propagator(lift_schedule(square_pulse(kPi, 0.0, kNominalOmega0), dim), cfg).mat();

  ScenarioReport r;
  r.name = "verify-reversal";
  r.inputs["d"] = dim;
  r.outputs["dev_lift"] = phase_insensitive_distance(lifted, target);
  r.outputs["dev_rotation"] = phase_insensitive_distance(rotated, target);
  r.outputs["dev_propagator"] = phase_insensitive_distance(pulsed, target);
  double worst = std::max({r.outputs["dev_lift"], r.outputs["dev_rotation"], r.outputs["dev_propagator"]});
  if (dim == 3) {
    CMatrix xa = CMatrix::Zero(3, 3);
    xa(0, 2) = xa(1, 1) = xa(2, 0) = 1.0;
    r.outputs["dev_xa"] = phase_insensitive_distance(lifted, xa);
    worst = std::max(worst, r.outputs["dev_xa"]);
  }
  r.outputs["max_dev"] = worst;
  r.pass = worst < 1e-10;
  io::CsvTable t;
  t.header = {"r", "s", "re", "im"};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t.add_row({i + 1.0, j + 1.0, lifted(i, j).real(), lifted(i, j).imag()});
  r.artifacts.push_back({"", t});
  return r;
}

inline ScenarioReport rotation_cycle_check() {
  const Unitary step = rotation_unitary(3, Eigen::Vector3d::UnitY(), kPi / 2.0);
  const std::vector<std::pair<std::string, std::vector<std::string>>> cycles{
      {"0", {"D", "0", "D", "0"}}, {"+1", {"u", "-1", "d", "+1"}}};
  ScenarioReport r;
  r.name = "rotation-cycle";
  io::CsvTable t;
  t.header = {"start_m", "step", "fidelity"};
  double worst = 0.0;
  for (const auto& [start, expected] : cycles) {
    StateVector psi = named_state(3, start);
    for (std::size_t k = 0; k < expected.size(); ++k) {
      psi = step.apply(psi);
      const double f = state_fidelity(psi, named_state(3, expected[k]));
      worst = std::max(worst, 1.0 - f);
      t.add_row({magnetic_number(3, start == "0" ? 1 : 2), k + 1.0, f});
    }
  }
  r.outputs["max_infidelity"] = worst;
  r.pass = worst < 1e-10;
  r.artifacts.push_back({"", t});
  return r;
}

/// Eigenstructure along delta / Omega for the d-level static Hamiltonian.
inline ScenarioReport eigen_scan_report(double omega, double x_min, double x_max, double x_step, int dim = 3) {
  if (!(x_step > 0.0 && x_max > x_min)) throw InvalidArgument("eigen_scan_report: bad grid");
  std::vector<double> xs;
  const auto count = static_cast<long>(std::floor((x_max - x_min) / x_step + 1e-9));
  for (long i = 0; i <= count; ++i) xs.push_back(x_min + static_cast<double>(i) * x_step);
  const auto scan = eigen_scan(omega, xs, dim);

  ScenarioReport r;
  r.name = "fig2ab";
  io::CsvTable t;
  t.header.push_back("delta_over_omega");
  for (int k = 0; k < dim; ++k) t.header.push_back("E" + std::to_string(k) + "_over_omega");
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) t.header.push_back("v" + std::to_string(k) + "_m" + level_label(dim, l));
  double min_overlap = 1.0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    std::vector<double> row{scan[i].delta_over_omega};
    for (int k = 0; k < dim; ++k) row.push_back(scan[i].eigenvalues[k] / omega);
    for (int k = 0; k < dim; ++k)
      for (int l = 0; l < dim; ++l) row.push_back(scan[i].eigenvectors(l, k));
    t.add_row(row);
    if (i > 0) {
      for (int k = 0; k < dim; ++k) {
        min_overlap = std::min(min_overlap,
                               std::abs(scan[i - 1].eigenvectors.col(k).dot(scan[i].eigenvectors.col(k))));
      }
    }
  }
  const auto zero = eigen_scan(omega, {0.0}, dim).front();
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < dim; ++k) gap = std::min(gap, zero.eigenvalues[k + 1] - zero.eigenvalues[k]);
  r.outputs["gap_at_zero_over_omega"] = gap / omega;
  r.outputs["min_neighbour_overlap"] = min_overlap;
  r.artifacts.push_back({"", t});
  return r;
}

}  // namespace majorana
