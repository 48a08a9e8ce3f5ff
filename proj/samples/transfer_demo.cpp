// Prepares |D> from |0> with the adiabatic chirp and with TBB1, then reads
// the state back through a simulated analysis-pulse fringe.
#include "majorana/experiments.hpp"

#include <cstdio>

using namespace majorana;

int main() {
  AdiabaticParams p;
  p.direction = Direction::Forward;
  p.t_hold = 0.0;
  const Unitary chirp = propagator(lift_schedule(adiabatic_method(p), 3));
  const Unitary tbb1 = propagator(lift_schedule(composite_method(tbb1_sequence(), kNominalOmega0), 3));

  const StateVector zero = named_state(3, "0");
  const StateVector dark = named_state(3, "D");
  std::printf("chirp  |<D|U|0>|^2 = %.8f\n", state_fidelity(chirp.apply(zero), dark));
  std::printf("tbb1   |<D|U|0>|^2 = %.8f\n", state_fidelity(tbb1.apply(zero), dark));

  MeasurementModel m;
  m.shots = 500;
  Rng rng(m.seed);
  const CMatrix rho = chirp.apply(zero).density();
  const DarkStateMeasurement meas = measure_dark_state(rho, m, rng);
  std::printf("fitted F_D = %.5f +- %.5f (exact %.5f)\n", meas.fit.fd, meas.fit.se_fd, meas.exact_fd);

  NoiseParams noise;
  noise.zeeman_sigma = kTwoPi * 300.0;
  for (TransferMethod method : {TransferMethod::Adiabatic, TransferMethod::Tbb1}) {
    std::printf("%-9s infidelity with 300 Hz Zeeman noise = %.3e\n", to_string(method).c_str(),
                ensemble_transfer_infidelity(method, noise));
  }
  return 0;
}
