#pragma once

// Time evolution under a lifted drive: piecewise-constant Hamiltonian steps,
// each exponentiated exactly, with H sampled at the step midpoint. Step
// boundaries always include segment boundaries and requested sample times.
// A result is accepted once halving the step changes every recorded
// amplitude by less than the configured tolerance.

#include "majorana/drive.hpp"
#include "majorana/errors.hpp"
#include "majorana/io.hpp"
#include "majorana/linalg.hpp"
#include "majorana/spin.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace majorana {

struct IntegratorConfig {
  /// Largest step in seconds; unset picks max(Omega, |delta|) * step = 0.05 rad.
  std::optional<double> max_step;
  double tolerance = 1e-9;
  int max_halvings = 14;

  static constexpr double kPhasePerStep = 0.05;

  void validate() const {
    if (max_step && !(*max_step > 0.0)) throw InvalidArgument("IntegratorConfig: max_step must be > 0");
    if (!(tolerance > 0.0)) throw InvalidArgument("IntegratorConfig: tolerance must be > 0");
    if (max_halvings < 0) throw InvalidArgument("IntegratorConfig: max_halvings must be >= 0");
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::string> level_labels;
  /// Level whose population is P_0; P(F=1) = 1 - P_0 is reported when set.
  std::optional<int> dark_level;

  std::size_t size() const { return times.size(); }
  std::vector<double> populations(std::size_t i) const { return states.at(i).populations(); }
  double p_f1(std::size_t i) const { return 1.0 - std::norm(states.at(i)[dark_level.value()]); }
  const StateVector& final_state() const { return states.back(); }
};

/// Default labelling for a spin ladder: m values, P_0 reported for odd d.
inline void label_spin_ladder(Trajectory& tr, int dim) {
  tr.level_labels.clear();
  for (int k = 0; k < dim; ++k) tr.level_labels.push_back("m" + level_label(dim, k));
  if (dim % 2 == 1) tr.dark_level = dim / 2;
}

/// CSV with columns time_us, p_<level>..., p_F1 (when a dark level is set).
inline io::CsvTable trajectory_table(const Trajectory& tr) {
  io::CsvTable table;
  table.header.push_back("time_us");
  for (const auto& l : tr.level_labels) table.header.push_back("p_" + l);
  if (tr.dark_level) table.header.push_back("p_F1");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> row{tr.times[i] * 1e6};
    for (double p : tr.populations(i)) row.push_back(p);
    if (tr.dark_level) row.push_back(tr.p_f1(i));
    table.add_row(row);
  }
  return table;
}

inline CMatrix hamiltonian(const MultiLevelDrive& drive, double t) {
  if (!(t >= 0.0 && t <= drive.duration())) {
    throw DomainError("hamiltonian: t outside the schedule domain");
  }
  return drive.hamiltonian(t);
}

namespace detail {

inline double default_step(const MultiLevelDrive& drive) {
  double rate = drive.schedule().max_rate();
  const auto& pert = drive.perturbation();
  for (double s : pert.transition_scale) rate = std::max(rate, rate * std::abs(s));
  for (double s : pert.level_shift) rate = std::max(rate, std::abs(s));
  // Gain curves are monotone; probe the peak and scale by the observed ratio.
  const double probe = drive.schedule().max_rate();
  if (probe > 0.0) {
    double peak_ratio = 1.0;
    for (double t : drive.schedule().boundaries()) {
      const ControlSample raw = drive.schedule().sample(t);
      if (raw.rabi_half > 0.0) peak_ratio = std::max(peak_ratio, drive.control(t).rabi_half / raw.rabi_half);
    }
    rate *= peak_ratio;
  }
  if (rate <= 0.0) return std::max(drive.duration(), 1e-300);
  return IntegratorConfig::kPhasePerStep / rate;
}

/// Evolves the columns of `x0` with step cap `h`; returns x(t) at each sample
/// time (sorted ascending).
inline std::vector<CMatrix> evolve(const MultiLevelDrive& drive, const CMatrix& x0, double h,
                                   const std::vector<double>& samples) {
  std::vector<double> marks = drive.schedule().boundaries();
  marks.insert(marks.end(), samples.begin(), samples.end());
  marks.push_back(drive.duration());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  std::vector<CMatrix> out;
  out.reserve(samples.size());
  std::size_t next = 0;
  auto record = [&](double t, const CMatrix& x) {
    while (next < samples.size() && samples[next] == t) {
      out.push_back(x);
      ++next;
    }
  };

  CMatrix x = x0;
  record(marks.front(), x);
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    const double a = marks[i];
    const double b = marks[i + 1];
    const double span = b - a;
    const auto n = static_cast<long>(std::max(1.0, std::ceil(span / h - 1e-9)));
    const double dt = span / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      const double mid = std::min(a + (static_cast<double>(k) + 0.5) * dt, b);
      x = expm_hermitian(drive.hamiltonian(mid), dt) * x;
    }
    record(b, x);
  }
  return out;
}

/// Runs `evolve` at successively halved steps until two successive results
/// agree within the tolerance.
inline std::vector<CMatrix> evolve_converged(const MultiLevelDrive& drive, const CMatrix& x0,
                                             const IntegratorConfig& cfg, const std::vector<double>& samples) {
  cfg.validate();
  double h = cfg.max_step.value_or(default_step(drive));
  std::vector<CMatrix> coarse = evolve(drive, x0, h, samples);
  double residual = 0.0;
  for (int k = 0; k <= cfg.max_halvings; ++k) {
    h *= 0.5;
    std::vector<CMatrix> fine = evolve(drive, x0, h, samples);
    residual = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) residual = std::max(residual, max_abs(fine[i] - coarse[i]));
    if (residual < cfg.tolerance) return fine;
    coarse = std::move(fine);
  }
  throw IntegratorError("integrator did not converge: last step-halving change " + std::to_string(residual),
                        residual);
}

}  // namespace detail

/// State trajectory at `sample_times` (need not be sorted; returned sorted).
inline Trajectory propagate(const MultiLevelDrive& drive, const StateVector& psi0, const IntegratorConfig& cfg,
                            std::vector<double> sample_times) {
  if (psi0.dim() != drive.dim()) throw DimensionMismatch("propagate: state and drive dimensions differ");
  std::sort(sample_times.begin(), sample_times.end());
  for (double t : sample_times) {
    if (!(t >= 0.0 && t <= drive.duration())) throw DomainError("propagate: sample time outside the schedule");
  }
  const std::vector<CMatrix> xs = detail::evolve_converged(drive, psi0.amps(), cfg, sample_times);
  Trajectory tr;
  tr.times = std::move(sample_times);
  tr.states.reserve(xs.size());
  for (const auto& x : xs) tr.states.emplace_back(CVector(x.col(0)), 1e-9);
  label_spin_ladder(tr, drive.dim());
  return tr;
}

/// Evenly spaced sample times over the whole drive, both ends included.
inline std::vector<double> uniform_times(double duration, std::size_t intervals) {
  std::vector<double> t(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) t[i] = duration * static_cast<double>(i) / intervals;
  t.back() = duration;
  return t;
}

inline Unitary propagator(const MultiLevelDrive& drive, const IntegratorConfig& cfg = {}) {
  const CMatrix id = CMatrix::Identity(drive.dim(), drive.dim());
  if (drive.duration() == 0.0) return Unitary(id);
  const std::vector<CMatrix> xs = detail::evolve_converged(drive, id, cfg, {drive.duration()});
  const double defect = unitarity_defect(xs.back());
  if (!(defect <= 1e-10)) {
    throw IntegratorError("propagator: accumulated product is not unitary", defect);
  }
  // Remove the rounding drift of the long step product (nearest unitary).
  Eigen::JacobiSVD<CMatrix> svd(xs.back(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Unitary(svd.matrixU() * svd.matrixV().adjoint(), 1e-12);
}

/// Eigen-decomposition of the static chi = 0 Hamiltonian
/// (Omega / sqrt 2) Jx + (x Omega / 2) Jz along a scan of x = delta / Omega,
/// where Omega is the three-level per-field Rabi frequency.
struct EigenScanPoint {
  double delta_over_omega = 0.0;
  RVector eigenvalues;   ///< track order (ascending at the first point)
  RMatrix eigenvectors;  ///< column k belongs to eigenvalues[k]; real gauge
};

inline std::vector<EigenScanPoint> eigen_scan(double omega, const std::vector<double>& delta_over_omega, int dim) {
  if (!(omega > 0.0)) throw InvalidArgument("eigen_scan: Omega must be > 0");
  const SpinOperators ops = angular_momentum_ops(dim);
  const RMatrix jx = ops.jx.real();
  const RMatrix jz = ops.jz.real();
  std::vector<EigenScanPoint> out;
  out.reserve(delta_over_omega.size());
  for (double x : delta_over_omega) {
    const RMatrix h = (omega / std::sqrt(2.0)) * jx + (0.5 * x * omega) * jz;
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(h);
    RVector values = solver.eigenvalues();
    RMatrix vectors = solver.eigenvectors();

    if (out.empty()) {
      for (int k = 0; k < dim; ++k) {
        Eigen::Index arg = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
      }
    } else {
      // Match each previous track to the unused eigenvector of largest overlap.
      const RMatrix& prev = out.back().eigenvectors;
      RVector v_sorted(dim);
      RMatrix m_sorted(dim, dim);
      std::vector<bool> used(dim, false);
      for (int k = 0; k < dim; ++k) {
        int best = -1;
        double best_overlap = -1.0;
        for (int j = 0; j < dim; ++j) {
          if (used[j]) continue;
          const double o = std::abs(prev.col(k).dot(vectors.col(j)));
          if (o > best_overlap) {
            best_overlap = o;
            best = j;
          }
        }
        used[best] = true;
        v_sorted[k] = values[best];
        m_sorted.col(k) = vectors.col(best);
        if (prev.col(k).dot(m_sorted.col(k)) < 0.0) m_sorted.col(k) *= -1.0;
      }
      values = v_sorted;
      vectors = m_sorted;
    }
    out.push_back({x, std::move(values), std::move(vectors)});
  }
  return out;
}

}  // namespace majorana
