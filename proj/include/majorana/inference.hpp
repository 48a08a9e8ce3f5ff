#pragma once

// Fluorescence measurement model and maximum-likelihood inference of the
// dark-state fidelity from phase-scanned population fringes.
//
// A shot is "bright" with probability p_b(p) = P(b|1) p + P(b|0) (1 - p),
// where p is the population outside |0> (the F = 1 manifold). Fringes are
// modelled as P_0(chi) = A0 + A cos(2 chi + phi0), and the fidelity of
// |D> = (|+1> - |-1>)/sqrt 2 is F_D = A0 - A cos(phi0).

#include "majorana/drive.hpp"
#include "majorana/dynamics.hpp"
#include "majorana/errors.hpp"
#include "majorana/io.hpp"
#include "majorana/linalg.hpp"
#include "majorana/simplex.hpp"
#include "majorana/spin.hpp"
#include "majorana/waveforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

namespace majorana {

// --- RNG streams -----------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for (seed, index), e.g. one per Monte-Carlo run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// --- measurement model -----------------------------------------------------

enum class CountMode {
  Binomial,  ///< k ~ Binomial(n, p_b)
  Expected,  ///< k = n p_b exactly (noiseless pipeline)
};

struct MeasurementModel {
  double p_bright_given_1 = 0.985;
  double p_bright_given_0 = 0.015;
  int shots = 200;
  std::uint64_t seed = 1;
  CountMode mode = CountMode::Binomial;

  void validate() const {
    if (!(0.0 <= p_bright_given_0 && p_bright_given_0 < p_bright_given_1 && p_bright_given_1 <= 1.0)) {
      throw InvalidArgument("MeasurementModel: require 0 <= P(b|0) < P(b|1) <= 1");
    }
    if (shots < 1) throw InvalidArgument("MeasurementModel: shots must be >= 1");
  }

  /// Perfect detection.
  static MeasurementModel ideal(int shots = 200, CountMode mode = CountMode::Binomial) {
    MeasurementModel m;
    m.p_bright_given_1 = 1.0;
    m.p_bright_given_0 = 0.0;
    m.shots = shots;
    m.mode = mode;
    return m;
  }
};

/// Probability of a bright shot when the F = 1 population is p.
inline double detection_map(double p, const MeasurementModel& m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("detection_map: p must lie in [0, 1]");
  return m.p_bright_given_1 * p + m.p_bright_given_0 * (1.0 - p);
}

/// Bright count for one data point; the value is a whole number in Binomial
/// mode and n p_b in Expected mode.
inline double sample_counts(double p_b, const MeasurementModel& m, Rng& rng) {
  const double p = std::clamp(p_b, 0.0, 1.0);
  if (m.mode == CountMode::Expected) return m.shots * p;
  std::binomial_distribution<long> dist(m.shots, p);
  return static_cast<double>(dist(rng));
}

/// Convenience overload drawing from a fresh stream seeded by `m.seed`.
inline double sample_counts(double p_b, const MeasurementModel& m) {
  Rng rng(m.seed);
  return sample_counts(p_b, m, rng);
}

/// Maximum-likelihood F = 1 population from k bright shots out of n.
inline double ml_estimate_single(double k, const MeasurementModel& m) {
  m.validate();
  if (!(k >= 0.0 && k <= m.shots)) throw DomainError("ml_estimate_single: k must lie in [0, n]");
  const double f = k / m.shots;
  return std::clamp((f - m.p_bright_given_0) / (m.p_bright_given_1 - m.p_bright_given_0), 0.0, 1.0);
}

// --- fringe data and fit ---------------------------------------------------

struct FringePoint {
  double chi = 0.0;  ///< analysis phase, rad
  double k = 0.0;    ///< bright counts
  int n = 0;         ///< shots

  friend bool operator==(const FringePoint&, const FringePoint&) = default;
};

struct FringeData {
  std::vector<FringePoint> points;

  void validate() const {
    for (const auto& p : points) {
      if (p.n < 1) throw InvalidArgument("FringeData: shots must be >= 1");
      if (!(p.k >= 0.0 && p.k <= p.n)) throw InvalidArgument("FringeData: require 0 <= k <= n");
    }
  }

  friend bool operator==(const FringeData&, const FringeData&) = default;
};

struct FitResult {
  double a0 = 0.0;
  double a = 0.0;
  double phi0 = 0.0;  ///< wrapped to [0, 2 pi)
  /// Covariance of (A0, A, phi0) from the observed information; NaN when the
  /// optimum sits where the information matrix is not positive definite.
  std::array<std::array<double, 3>, 3> covariance{};
  double se_a0 = 0.0;
  double se_a = 0.0;
  double se_phi0 = 0.0;
  double log_likelihood = 0.0;
  double fd_raw = 0.0;  ///< A0 - A cos(phi0), unclipped
  double fd = 0.0;      ///< clipped to [0, 1]
  double se_fd = 0.0;
};

struct DarkStateFidelity {
  double value = 0.0;  ///< clipped to [0, 1]
  double raw = 0.0;
  double sigma = 0.0;
};

/// F_D = A0 - A cos(phi0) with first-order error propagation through the
/// fit covariance. Clipping happens after propagation.
inline DarkStateFidelity dark_state_fidelity(const FitResult& f) {
  DarkStateFidelity d;
  d.raw = f.a0 - f.a * std::cos(f.phi0);
  const std::array<double, 3> g{1.0, -std::cos(f.phi0), f.a * std::sin(f.phi0)};
  double var = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) var += g[i] * f.covariance[i][j] * g[j];
  d.sigma = std::sqrt(var);
  d.value = std::clamp(d.raw, 0.0, 1.0);
  return d;
}

namespace detail {

/// log of the beta-density form (n+1) C(n,k) p^k (1-p)^(n-k); real k allowed.
inline double log_beta_binomial_term(double k, int n, double p) {
  const double norm = std::log(n + 1.0) + std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  double ll = norm;
  if (k > 0.0) {
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += k * std::log(p);
  }
  if (n - k > 0.0) {
    if (!(p < 1.0)) return -std::numeric_limits<double>::infinity();
    ll += (n - k) * std::log1p(-p);
  }
  return ll;
}

/// Log-likelihood of the fringe model P_0 = c0 + c1 cos 2chi + c2 sin 2chi.
/// Outside the physical range p_b is still evaluated (used for curvature);
/// the result is -inf when p_b leaves (0, 1) where the data need it.
inline double fringe_log_likelihood(const FringeData& data, const MeasurementModel& m, double c0, double c1,
                                    double c2) {
  double ll = 0.0;
  for (const auto& pt : data.points) {
    const double p0 = c0 + c1 * std::cos(2.0 * pt.chi) + c2 * std::sin(2.0 * pt.chi);
    const double pf1 = 1.0 - p0;
    const double pb = m.p_bright_given_1 * pf1 + m.p_bright_given_0 * (1.0 - pf1);
    ll += log_beta_binomial_term(pt.k, pt.n, pb);
  }
  return ll;
}

struct FringeParams {
  double a0 = 0.0;
  double a = 0.0;
  double phi0 = 0.0;
};

/// Smooth map from R^3 onto the set 0 <= A0 <= 1, 0 <= A <= min(A0, 1 - A0)
/// where the model is a probability for every chi.
inline FringeParams from_unbounded(const std::vector<double>& x) {
  FringeParams p;
  p.a0 = 0.5 * (1.0 + std::sin(x[0]));
  p.a = std::min(p.a0, 1.0 - p.a0) * 0.5 * (1.0 + std::sin(x[1]));
  p.phi0 = x[2];
  return p;
}

inline std::vector<double> to_unbounded(const FringeParams& p) {
  const double a0 = std::clamp(p.a0, 0.0, 1.0);
  const double amax = std::min(a0, 1.0 - a0);
  const double frac = amax > 0.0 ? std::clamp(2.0 * p.a / amax - 1.0, -1.0, 1.0) : 0.0;
  return {std::asin(2.0 * a0 - 1.0), std::asin(frac), p.phi0};
}

inline double wrap_phase(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi -= kTwoPi;
  return phi;
}

}  // namespace detail

/// Maximum-likelihood fit of P_0(chi) = A0 + A cos(2 chi + phi0) to bright
/// counts, keeping the model inside [0, 1] for all chi.
inline FitResult ml_fit_fringe(const FringeData& data, const MeasurementModel& m) {
  m.validate();
  data.validate();
  if (data.points.size() < 4) throw InvalidArgument("ml_fit_fringe: need at least 4 points");
  const auto [lo, hi] = std::minmax_element(data.points.begin(), data.points.end(),
                                            [](const FringePoint& a, const FringePoint& b) { return a.chi < b.chi; });
  if (hi->chi - lo->chi == 0.0) throw FitSingular("ml_fit_fringe: all points share the same phase");
  if (hi->chi - lo->chi < 0.5 * kPi - 1e-12) {
    throw InvalidArgument("ml_fit_fringe: points must span at least half a fringe period (pi/2)");
  }

  double mean_p0 = 0.0;
  for (const auto& pt : data.points) {
    MeasurementModel mi = m;
    mi.shots = pt.n;
    mean_p0 += 1.0 - ml_estimate_single(pt.k, mi);
  }
  mean_p0 /= static_cast<double>(data.points.size());

  const simplex::Objective objective = [&](const std::vector<double>& x) {
    const detail::FringeParams p = detail::from_unbounded(x);
    const double ll =
        detail::fringe_log_likelihood(data, m, p.a0, p.a * std::cos(p.phi0), -p.a * std::sin(p.phi0));
    return std::isfinite(ll) ? -ll : 1e300;
  };

  // Multi-start over phi0, then simplex restarts from the best point.
  simplex::Result best;
  best.value = std::numeric_limits<double>::infinity();
  const double a0_start = std::clamp(mean_p0, 0.02, 0.98);
  for (double phi : {0.0, 0.5 * kPi, kPi, 1.5 * kPi}) {
    const detail::FringeParams start{a0_start, 0.5 * std::min(a0_start, 1.0 - a0_start), phi};
    const simplex::Result r = simplex::minimize(objective, detail::to_unbounded(start), {0.3, 0.5, 0.5});
    if (r.value < best.value) best = r;
  }
  for (int restart = 0; restart < 3; ++restart) {
    const simplex::Result again = simplex::minimize(objective, best.x, {1e-2, 1e-2, 1e-2});
    if (again.value <= best.value) best = again;
  }

  const detail::FringeParams fp = detail::from_unbounded(best.x);
  FitResult f;
  f.a0 = fp.a0;
  f.a = fp.a;
  f.phi0 = f.a > 0.0 ? detail::wrap_phase(fp.phi0) : 0.0;
  f.log_likelihood = detail::fringe_log_likelihood(data, m, f.a0, f.a * std::cos(f.phi0), -f.a * std::sin(f.phi0));

  // Observed information in (A0, A, phi0) by central differences.
  auto nll = [&](const std::array<double, 3>& p) {
    return -detail::fringe_log_likelihood(data, m, p[0], p[1] * std::cos(p[2]), -p[1] * std::sin(p[2]));
  };
  const std::array<double, 3> x{f.a0, f.a, f.phi0};
  const std::array<double, 3> h{1e-4, 1e-4, 1e-4};
  Eigen::Matrix3d hess;
  const double f0 = nll(x);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      auto at = [&](double si, double sj) {
        std::array<double, 3> y = x;
        y[i] += si * h[i];
        y[j] += sj * h[j];
        return nll(y);
      };
      if (i == j) {
        hess(i, i) = (at(0.5, 0.5) - 2.0 * f0 + at(-0.5, -0.5)) / (h[i] * h[i]);
      } else {
        hess(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
        hess(j, i) = hess(i, j);
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Constant(nan);
  if (hess.allFinite()) {
    Eigen::LLT<Eigen::Matrix3d> llt(hess);
    if (llt.info() == Eigen::Success) cov = llt.solve(Eigen::Matrix3d::Identity());
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.covariance[i][j] = cov(i, j);
  f.se_a0 = std::sqrt(cov(0, 0));
  f.se_a = std::sqrt(cov(1, 1));
  f.se_phi0 = std::sqrt(cov(2, 2));

  const DarkStateFidelity fd = dark_state_fidelity(f);
  f.fd_raw = fd.raw;
  f.fd = fd.value;
  f.se_fd = fd.sigma;
  return f;
}

// --- fringe prediction -----------------------------------------------------

namespace detail {

inline void validate_density(const CMatrix& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionMismatch("density matrix has the wrong dimension");
  if (max_abs(rho - rho.adjoint()) > 1e-9) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-9) throw InvalidArgument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw InvalidArgument("density matrix is not positive");
}

}  // namespace detail

/// Propagator of the resonant analysis pulse (two-level area pi/2) at phase chi.
inline Unitary analysis_pulse(double chi, int dim = 3) {
  return propagator(lift_schedule(square_pulse(0.5 * kPi, chi, kTwoPi * 40e3), dim));
}

/// P_0 after the analysis pulse at phase chi, by propagating rho.
inline double fringe_prediction(const CMatrix& rho, double chi) {
  detail::validate_density(rho, 3);
  const CMatrix u = analysis_pulse(chi).mat();
  return (u * rho * u.adjoint())(1, 1).real();
}

/// Evenly spaced analysis phases over one fringe period [0, pi).
inline std::vector<double> fringe_phases(std::size_t count) {
  std::vector<double> chis(count);
  for (std::size_t i = 0; i < count; ++i) chis[i] = kPi * static_cast<double>(i) / count;
  return chis;
}

/// Counts for a fringe given the true P_0 at each phase.
inline FringeData synthesize_fringe(const std::vector<double>& chis, const std::vector<double>& p0,
                                    const MeasurementModel& m, Rng& rng) {
  m.validate();
  if (chis.size() != p0.size()) throw DimensionMismatch("synthesize_fringe: size mismatch");
  FringeData data;
  for (std::size_t i = 0; i < chis.size(); ++i) {
    const double pb = detection_map(std::clamp(1.0 - p0[i], 0.0, 1.0), m);
    data.points.push_back({chis[i], sample_counts(pb, m, rng), m.shots});
  }
  return data;
}

/// Fringe CSV: chi_rad, k, n, p0_corrected (ML-normalised P_0 per point).
inline io::CsvTable fringe_table(const FringeData& data, const MeasurementModel& m) {
  io::CsvTable t;
  t.header = {"chi_rad", "k", "n", "p0_corrected"};
  for (const auto& pt : data.points) {
    MeasurementModel mi = m;
    mi.shots = pt.n;
    t.add_row({pt.chi, pt.k, static_cast<double>(pt.n), 1.0 - ml_estimate_single(pt.k, mi)});
  }
  return t;
}

// --- infidelity per operation ----------------------------------------------

struct FidelityPoint {
  double ops = 0.0;  ///< number of operations N
  double fidelity = 0.0;
  double sigma = 0.0;
};

struct InfidelityRate {
  double epsilon = 0.0;
  double sigma = 0.0;
};

/// Weighted least squares of F = 1 - N epsilon (intercept fixed at 1).
inline InfidelityRate infidelity_per_op(const std::vector<FidelityPoint>& points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.sigma > 0.0)) throw InvalidArgument("infidelity_per_op: sigma must be > 0");
    if (!(p.ops >= 0.0)) throw InvalidArgument("infidelity_per_op: N must be >= 0");
    distinct.insert(p.ops);
  }
  if (distinct.size() < 2) throw FitSingular("infidelity_per_op: need at least two distinct N");
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double w = 1.0 / (p.sigma * p.sigma);
    sxx += w * p.ops * p.ops;
    sxy += w * p.ops * (1.0 - p.fidelity);
  }
  if (!(sxx > 0.0)) throw FitSingular("infidelity_per_op: singular design");
  return {sxy / sxx, 1.0 / std::sqrt(sxx)};
}

// --- JSON ------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const FringePoint& p) { j = {{"chi_rad", p.chi}, {"k", p.k}, {"n", p.n}}; }
inline void from_json(const nlohmann::json& j, FringePoint& p) {
  p.chi = j.at("chi_rad").get<double>();
  p.k = j.at("k").get<double>();
  p.n = j.at("n").get<int>();
}
inline void to_json(nlohmann::json& j, const FringeData& d) { j = {{"points", d.points}}; }
inline void from_json(const nlohmann::json& j, FringeData& d) {
  d.points = j.at("points").get<std::vector<FringePoint>>();
  d.validate();
}

inline void to_json(nlohmann::json& j, const FitResult& f) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json cov = nlohmann::json::array();
  for (const auto& row : f.covariance) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(num(v));
    cov.push_back(r);
  }
  j = {{"A0", f.a0},         {"A", f.a},          {"phi0", f.phi0},         {"se_A0", num(f.se_a0)},
       {"se_A", num(f.se_a)}, {"se_phi0", num(f.se_phi0)}, {"covariance", cov}, {"log_likelihood", f.log_likelihood},
       {"F_D_raw", f.fd_raw}, {"F_D", f.fd},       {"se_F_D", num(f.se_fd)}};
}

inline void from_json(const nlohmann::json& j, FitResult& f) {
  auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  f.a0 = j.at("A0").get<double>();
  f.a = j.at("A").get<double>();
  f.phi0 = j.at("phi0").get<double>();
  f.se_a0 = num(j.at("se_A0"));
  f.se_a = num(j.at("se_A"));
  f.se_phi0 = num(j.at("se_phi0"));
  const auto& cov = j.at("covariance");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) f.covariance[r][c] = num(cov.at(r).at(c));
  f.log_likelihood = j.at("log_likelihood").get<double>();
  f.fd_raw = j.at("F_D_raw").get<double>();
  f.fd = j.at("F_D").get<double>();
  f.se_fd = num(j.at("se_F_D"));
}

}  // namespace majorana
