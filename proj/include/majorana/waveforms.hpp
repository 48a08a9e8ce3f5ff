#pragma once

// Two-level control schedules: square and composite resonant pulses, the
// Blackman amplitude-ramp / detuning-chirp adiabatic passage, and holds.
//
// Units: angular frequencies in rad/s, times in seconds, phases in radians.
// A schedule describes the effective two-level control vector
// (Omega_1/2(t), chi(t), delta_1/2(t)); see drive.hpp for the d-level lift.

#include "majorana/errors.hpp"
#include "majorana/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace majorana {

// --- Blackman profiles -----------------------------------------------------

/// Instantaneous detuning of the Blackman chirp from delta0 (t = 0) to 0 (t = t_delta).
inline double blackman_detuning(double delta0, double t_delta, double t) {
  if (!(t >= 0.0 && t <= t_delta)) {
    throw DomainError("blackman_detuning: t must lie in [0, t_delta]");
  }
  const double x = kPi * t / t_delta;
  return delta0 / 50.0 * (21.0 + 25.0 * std::cos(x) + 4.0 * std::cos(2.0 * x));
}

/// Blackman amplitude ramp from 0 to omega0 over t_omega, constant afterwards.
inline double blackman_rabi(double omega0, double t_omega, double t) {
  if (!(t >= 0.0)) throw DomainError("blackman_rabi: t must be non-negative");
  if (t >= t_omega) return omega0;
  const double x = kPi * t / t_omega;
  return omega0 / 50.0 * (29.0 - 25.0 * std::cos(x) - 4.0 * std::cos(2.0 * x));
}

/// Lab-frame frequency offset Delta(t) = (1/t) * integral_0^t delta(tau) dtau
/// realising the Blackman instantaneous detuning. Requires 0 < t <= t_delta;
/// the t -> 0+ limit is `lab_frame_chirp_limit`.
inline double lab_frame_chirp(double delta0, double t_delta, double t) {
  if (!(t > 0.0 && t <= t_delta)) {
    throw DomainError("lab_frame_chirp: t must lie in (0, t_delta]");
  }
  const double x = kPi * t / t_delta;
  return delta0 / (50.0 * t) *
         (21.0 * t + t_delta / kPi * (25.0 * std::sin(x) + 2.0 * std::sin(2.0 * x)));
}

inline double lab_frame_chirp_limit(double delta0) { return delta0; }

// --- schedule segments -----------------------------------------------------

/// Effective two-level control vector at one instant.
struct ControlSample {
  double rabi_half = 0.0;      ///< Omega_1/2, rad/s
  double phase = 0.0;          ///< chi, rad
  double detuning_half = 0.0;  ///< delta_1/2, rad/s

  friend bool operator==(const ControlSample&, const ControlSample&) = default;
};

enum class SegmentKind { Square, Hold, BlackmanForward, BlackmanReverse };

inline std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Square: return "square";
    case SegmentKind::Hold: return "hold";
    case SegmentKind::BlackmanForward: return "blackman_forward";
    case SegmentKind::BlackmanReverse: return "blackman_reverse";
  }
  return "unknown";
}

/// Constant controls: a resonant/square pulse or a protection hold.
struct ConstantSegment {
  SegmentKind kind = SegmentKind::Square;
  double duration = 0.0;
  double rabi_half = 0.0;
  double phase = 0.0;
  double detuning_half = 0.0;

  ControlSample sample(double /*local_t*/) const { return {rabi_half, phase, detuning_half}; }
  double max_rate() const { return std::max(std::sqrt(2.0) * std::abs(rabi_half), 2.0 * std::abs(detuning_half)); }

  friend bool operator==(const ConstantSegment&, const ConstantSegment&) = default;
};

/// Blackman ramp + chirp with three-level peak Rabi omega0 and initial
/// detuning delta0. Forward runs from (0, delta0) to (omega0, 0); the reverse
/// segment is its time mirror. Duration is t_delta.
struct BlackmanSegment {
  double omega0 = 0.0;
  double delta0 = 0.0;
  double t_omega = 0.0;
  double t_delta = 0.0;
  bool reversed = false;

  double duration() const { return t_delta; }

  ControlSample sample(double local_t) const {
    const double tau = std::clamp(reversed ? t_delta - local_t : local_t, 0.0, t_delta);
    return {blackman_rabi(omega0, t_omega, tau) / std::sqrt(2.0), 0.0,
            0.5 * blackman_detuning(delta0, t_delta, tau)};
  }

  double max_rate() const { return std::max(std::abs(omega0), std::abs(delta0)); }

  friend bool operator==(const BlackmanSegment&, const BlackmanSegment&) = default;
};

using Segment = std::variant<ConstantSegment, BlackmanSegment>;

inline double segment_duration(const Segment& s) {
  return std::visit(
      [](const auto& seg) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, ConstantSegment>) {
          return seg.duration;
        } else {
          return seg.duration();
        }
      },
      s);
}

inline SegmentKind segment_kind(const Segment& s) {
  if (const auto* c = std::get_if<ConstantSegment>(&s)) return c->kind;
  return std::get<BlackmanSegment>(s).reversed ? SegmentKind::BlackmanReverse
                                                : SegmentKind::BlackmanForward;
}

// --- schedule --------------------------------------------------------------

/// Ordered, time-contiguous list of segments; a continuous-time function on
/// [0, total_duration]. A time on a boundary belongs to the later segment,
/// except the final instant, which belongs to the last segment.
class ControlSchedule {
 public:
  ControlSchedule() = default;

  explicit ControlSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    starts_.reserve(segments_.size());
    double t = 0.0;
    for (const auto& s : segments_) {
      const double d = segment_duration(s);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw InvalidArgument("ControlSchedule: segment durations must be finite and >= 0");
      }
      validate(s);
      starts_.push_back(t);
      t += d;
    }
    total_ = t;
  }

  const std::vector<Segment>& segments() const { return segments_; }
  double total_duration() const { return total_; }
  bool empty() const { return segments_.empty(); }

  /// Start time of each segment.
  const std::vector<double>& segment_starts() const { return starts_; }

  /// Boundaries 0 = b_0 < b_1 < ... < b_n = total, zero-length segments dropped.
  std::vector<double> boundaries() const {
    std::vector<double> b{0.0};
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const double end = starts_[i] + segment_duration(segments_[i]);
      if (end > b.back()) b.push_back(end);
    }
    return b;
  }

  ControlSample sample(double t) const {
    if (!(t >= 0.0 && t <= total_)) {
      throw DomainError("ControlSchedule::sample: t = " + std::to_string(t) + " outside [0, " +
                        std::to_string(total_) + "]");
    }
    const std::size_t i = index_at(t);
    if (i == segments_.size()) return {};
    const double local = t - starts_[i];
    return std::visit([local](const auto& seg) { return seg.sample(local); }, segments_[i]);
  }

  /// Index of the segment containing `t` (segments.size() if there is none).
  std::size_t index_at(double t) const {
    std::size_t found = segments_.size();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const double d = segment_duration(segments_[i]);
      if (d <= 0.0) continue;
      if (t >= starts_[i]) found = i;
      else break;
    }
    return found;
  }

  /// Upper bound of max(Omega, |delta|) in three-level units, used to pick
  /// the default integrator step.
  double max_rate() const {
    double r = 0.0;
    for (const auto& s : segments_) {
      r = std::max(r, std::visit([](const auto& seg) { return seg.max_rate(); }, s));
    }
    return r;
  }

  friend bool operator==(const ControlSchedule& a, const ControlSchedule& b) {
    return a.segments_ == b.segments_;
  }

 private:
  static void validate(const Segment& s) {
    if (const auto* b = std::get_if<BlackmanSegment>(&s)) {
      if (!(b->t_omega > 0.0 && b->t_omega <= b->t_delta)) {
        throw InvalidArgument("BlackmanSegment: require 0 < t_omega <= t_delta");
      }
    }
  }

  std::vector<Segment> segments_;
  std::vector<double> starts_;
  double total_ = 0.0;
};

inline ControlSchedule concatenate(const ControlSchedule& a, const ControlSchedule& b) {
  std::vector<Segment> segs = a.segments();
  segs.insert(segs.end(), b.segments().begin(), b.segments().end());
  return ControlSchedule(std::move(segs));
}

/// Time mirror: sample(total - t) of the result equals sample(t) of `s`.
inline ControlSchedule time_mirrored(const ControlSchedule& s) {
  std::vector<Segment> segs(s.segments().rbegin(), s.segments().rend());
  for (auto& seg : segs) {
    if (auto* b = std::get_if<BlackmanSegment>(&seg)) b->reversed = !b->reversed;
  }
  return ControlSchedule(std::move(segs));
}

/// Scales every pulse duration by `factor` at fixed amplitudes; Blackman
/// segments have both ramp and chirp times scaled.
inline ControlSchedule scale_durations(const ControlSchedule& s, double factor) {
  if (!(factor >= 0.0)) throw InvalidArgument("scale_durations: factor must be >= 0");
  std::vector<Segment> segs = s.segments();
  for (auto& seg : segs) {
    if (auto* c = std::get_if<ConstantSegment>(&seg)) {
      c->duration *= factor;
    } else {
      auto& b = std::get<BlackmanSegment>(seg);
      b.t_omega *= factor;
      b.t_delta *= factor;
    }
  }
  return ControlSchedule(std::move(segs));
}

// --- adiabatic method ------------------------------------------------------

enum class Direction { Forward, Reverse, RoundTrip };

struct AdiabaticParams {
  double omega0 = kTwoPi * 40e3;  ///< peak per-field three-level Rabi frequency
  double delta0 = kTwoPi * 60e3;  ///< initial three-level detuning
  double t_omega = 200e-6;        ///< amplitude ramp time
  double t_delta = 300e-6;        ///< detuning chirp time
  double t_hold = 400e-6;         ///< protection hold
  Direction direction = Direction::RoundTrip;

  void validate() const {
    if (!(omega0 > 0.0)) throw InvalidArgument("AdiabaticParams: omega0 must be > 0");
    if (!(delta0 > 0.0)) throw InvalidArgument("AdiabaticParams: delta0 must be > 0");
    if (!(t_omega > 0.0 && t_omega <= t_delta)) {
      throw InvalidArgument("AdiabaticParams: require 0 < t_omega <= t_delta");
    }
    if (!(t_hold >= 0.0)) throw InvalidArgument("AdiabaticParams: t_hold must be >= 0");
  }
};

/// Forward: ramp+chirp then hold. Reverse: the time mirror of forward.
/// Round trip: ramp+chirp, hold, mirrored ramp+chirp.
inline ControlSchedule adiabatic_method(const AdiabaticParams& p) {
  p.validate();
  const BlackmanSegment ramp{p.omega0, p.delta0, p.t_omega, p.t_delta, false};
  BlackmanSegment back = ramp;
  back.reversed = true;
  const ConstantSegment hold{SegmentKind::Hold, p.t_hold, p.omega0 / std::sqrt(2.0), 0.0, 0.0};

  std::vector<Segment> segs;
  switch (p.direction) {
    case Direction::Forward:
      segs.push_back(ramp);
      if (p.t_hold > 0.0) segs.push_back(hold);
      break;
    case Direction::Reverse:
      if (p.t_hold > 0.0) segs.push_back(hold);
      segs.push_back(back);
      break;
    case Direction::RoundTrip:
      segs.push_back(ramp);
      if (p.t_hold > 0.0) segs.push_back(hold);
      segs.push_back(back);
      break;
  }
  return ControlSchedule(std::move(segs));
}

// --- composite pulses ------------------------------------------------------

/// Rotation R(theta, phi) about cos(phi) x + sin(phi) y.
struct Rotation {
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

/// Rotations in time order: element 0 is applied first. (Operator products
/// written left-to-right read in the opposite order.)
struct CompositeSequence {
  std::vector<Rotation> rotations;

  void validate() const {
    for (const auto& r : rotations) {
      if (!(r.theta >= 0.0)) throw InvalidArgument("CompositeSequence: rotation angles must be >= 0");
    }
  }

  /// The sequence undoing this one: reversed order, each phase advanced by pi.
  CompositeSequence inverse() const {
    CompositeSequence inv;
    for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
      inv.rotations.push_back({it->theta, std::fmod(it->phi + kPi, kTwoPi)});
    }
    return inv;
  }

  friend bool operator==(const CompositeSequence&, const CompositeSequence&) = default;
};

/// Wimperis BB1 for a target rotation R(theta, phi): the correcting
/// R(pi, phi+p1) R(2pi, phi+3p1) R(pi, phi+p1) with p1 = acos(-theta / 4pi),
/// followed by the target rotation.
inline CompositeSequence bb1_sequence(double theta, double phi) {
  const double p1 = std::acos(-theta / (4.0 * kPi));
  auto wrap = [](double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
  };
  return CompositeSequence{{{kPi, wrap(phi + p1)},
                            {kTwoPi, wrap(phi + 3.0 * p1)},
                            {kPi, wrap(phi + p1)},
                            {theta, wrap(phi)}}};
}

/// The three-level BB1 transfer |0> -> |D>: BB1 around R(pi/2, pi/2).
inline CompositeSequence tbb1_sequence() { return bb1_sequence(kPi / 2.0, kPi / 2.0); }

/// One resonant segment per rotation with Omega_1/2 = omega0 / sqrt(2),
/// duration sqrt(2) theta / omega0 and chi = phi. With `protect`, a hold at
/// chi = 0 of `protect_duration` follows.
inline ControlSchedule composite_method(const CompositeSequence& seq, double omega0, bool protect = false,
                                        double protect_duration = 0.0) {
  if (!(omega0 > 0.0)) throw InvalidArgument("composite_method: omega0 must be > 0");
  if (!(protect_duration >= 0.0)) throw InvalidArgument("composite_method: protect_duration must be >= 0");
  seq.validate();
  const double rabi_half = omega0 / std::sqrt(2.0);
  std::vector<Segment> segs;
  segs.reserve(seq.rotations.size() + 1);
  for (const auto& r : seq.rotations) {
    segs.push_back(ConstantSegment{SegmentKind::Square, std::sqrt(2.0) * r.theta / omega0, rabi_half, r.phi, 0.0});
  }
  if (protect) segs.push_back(ConstantSegment{SegmentKind::Hold, protect_duration, rabi_half, 0.0, 0.0});
  return ControlSchedule(std::move(segs));
}

inline ControlSchedule square_pulse(double theta, double phi, double omega0) {
  return composite_method(CompositeSequence{{{theta, phi}}}, omega0, false);
}

}  // namespace majorana
