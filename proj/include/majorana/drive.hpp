#pragma once

// Lifting a two-level control schedule to a d-level drive: the same control
// vector Lambda(t) = (Omega_1/2 cos chi, Omega_1/2 sin chi, delta_1/2) dotted
// into the spin-j operators. For d = 3 this is the pair of fields with Rabi
// frequency sqrt(2) Omega_1/2, phases +-chi and detunings +-2 delta_1/2.

#include "majorana/errors.hpp"
#include "majorana/linalg.hpp"
#include "majorana/spin.hpp"
#include "majorana/waveforms.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace majorana {

/// Monotone map applied to Omega_1/2(t), e.g. an amplifier gain curve.
using RabiGain = std::function<double(double)>;

/// Deviations from the ideal SU(2)-symmetric drive. Empty vectors mean none.
struct DrivePerturbation {
  std::vector<double> transition_scale;  ///< per adjacent-m coupling (size d-1)
  std::vector<double> level_shift;       ///< rad/s added to each diagonal entry (size d)

  bool empty() const { return transition_scale.empty() && level_shift.empty(); }
};

/// Field on one adjacent-m transition. `anchor` is the level nearer the
/// middle of the ladder; phase is arg <target|H|anchor> and the detuning is
/// reported in the V-system convention where the diagonal carries +-detuning/2,
/// i.e. detuning = 2 (H_target - H_anchor).
struct TransitionDrive {
  int anchor = 0;
  int target = 0;
  double rabi = 0.0;
  double phase = 0.0;
  double detuning = 0.0;
};

class MultiLevelDrive {
 public:
  MultiLevelDrive(ControlSchedule schedule, int dim, RabiGain gain = {}, DrivePerturbation perturbation = {})
      : schedule_(std::move(schedule)),
        ops_(std::make_shared<const SpinOperators>(angular_momentum_ops(dim))),
        gain_(std::move(gain)),
        perturbation_(std::move(perturbation)) {
    if (!perturbation_.transition_scale.empty() &&
        static_cast<int>(perturbation_.transition_scale.size()) != dim - 1) {
      throw DimensionMismatch("MultiLevelDrive: transition_scale must have d-1 entries");
    }
    if (!perturbation_.level_shift.empty() && static_cast<int>(perturbation_.level_shift.size()) != dim) {
      throw DimensionMismatch("MultiLevelDrive: level_shift must have d entries");
    }
  }

  int dim() const { return ops_->dim; }
  const ControlSchedule& schedule() const { return schedule_; }
  const SpinOperators& ops() const { return *ops_; }
  double duration() const { return schedule_.total_duration(); }
  const DrivePerturbation& perturbation() const { return perturbation_; }
  bool su2_symmetric() const { return perturbation_.empty(); }

  /// Control vector after the gain curve.
  ControlSample control(double t) const {
    ControlSample c = schedule_.sample(t);
    if (gain_) c.rabi_half = gain_(c.rabi_half);
    return c;
  }

  /// Rotating-frame Hamiltonian H(t) (hbar = 1).
  CMatrix hamiltonian(double t) const {
    const ControlSample c = control(t);
    CMatrix h = (c.rabi_half * std::cos(c.phase)) * ops_->jx + (c.rabi_half * std::sin(c.phase)) * ops_->jy +
                c.detuning_half * ops_->jz;
    if (!perturbation_.transition_scale.empty()) {
      for (int k = 0; k + 1 < dim(); ++k) {
        h(k, k + 1) *= perturbation_.transition_scale[k];
        h(k + 1, k) *= perturbation_.transition_scale[k];
      }
    }
    if (!perturbation_.level_shift.empty()) {
      for (int k = 0; k < dim(); ++k) h(k, k) += perturbation_.level_shift[k];
    }
    return h;
  }

  std::vector<TransitionDrive> transitions(double t) const {
    const CMatrix h = hamiltonian(t);
    const double centre = 0.5 * (dim() - 1);
    std::vector<TransitionDrive> out;
    for (int k = 0; k + 1 < dim(); ++k) {
      TransitionDrive tr;
      // Below the centre the upper level k+1 is the anchor.
      if (k + 1 <= centre) {
        tr.anchor = k + 1;
        tr.target = k;
      } else {
        tr.anchor = k;
        tr.target = k + 1;
      }
      const Complex coupling = h(tr.target, tr.anchor);
      tr.rabi = 2.0 * std::abs(coupling);
      tr.phase = tr.rabi > 0.0 ? std::arg(coupling) : 0.0;
      tr.detuning = 2.0 * (h(tr.target, tr.target) - h(tr.anchor, tr.anchor)).real();
      out.push_back(tr);
    }
    return out;
  }

  /// Same drive with all durations and controls, but a new perturbation.
  MultiLevelDrive with_perturbation(DrivePerturbation p) const {
    return MultiLevelDrive(schedule_, dim(), gain_, std::move(p));
  }

  MultiLevelDrive with_gain(RabiGain gain) const {
    return MultiLevelDrive(schedule_, dim(), std::move(gain), perturbation_);
  }

 private:
  ControlSchedule schedule_;
  std::shared_ptr<const SpinOperators> ops_;
  RabiGain gain_;
  DrivePerturbation perturbation_;
};

inline MultiLevelDrive lift_schedule(const ControlSchedule& s, int dim) {
  if (dim < 2) throw InvalidDimension("lift_schedule: d must be >= 2");
  return MultiLevelDrive(s, dim);
}

/// Constant multiplicative gain, e.g. a common Rabi-frequency error.
inline RabiGain constant_gain(double factor) {
  return [factor](double rabi) { return factor * rabi; };
}

}  // namespace majorana
