#include "majorana/acceptance.hpp"
#include "majorana/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace majorana;

namespace {

double single_forward_infidelity(const AdiabaticParams& base, const IntegratorConfig& cfg = {}) {
  return static_error_infidelity(0.0, 0.0, base, cfg);
}

}  // namespace

TEST(Quadrature, GaussianMoments) {
  const double sigma = 3.0;
  for (int count : {3, 5, 7, 9}) {
    double w = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (const auto& n : gaussian_nodes(sigma, count)) {
      w += n.weight;
      m1 += n.weight * n.shift;
      m2 += n.weight * n.shift * n.shift;
      m4 += n.weight * std::pow(n.shift, 4);
    }
    EXPECT_NEAR(w, 1.0, 1e-13);
    EXPECT_NEAR(m1, 0.0, 1e-12);
    EXPECT_NEAR(m2, sigma * sigma, 1e-12);
    EXPECT_NEAR(m4, 3.0 * std::pow(sigma, 4), 1e-10);
  }
  EXPECT_EQ(gaussian_nodes(0.0, 7).size(), 1u);
}

TEST(NoiseModel, PerturbedHamiltonian) {
  NoiseParams noise;
  noise.rabi_mismatch = 0.1;
  noise.static_detuning = 5.0;
  noise.common_rabi_error = -0.25 * kNominalOmega0;
  const ControlSchedule s = square_pulse(kPi, 0.0, kNominalOmega0);
  const CMatrix h = hamiltonian(noisy_drive(s, noise, kNominalOmega0, 2.0), 1e-6);
  const double half = 0.75 * kNominalOmega0 / 2.0;
  EXPECT_NEAR(std::abs(h(0, 1)), 1.1 * half, 1e-9);
  EXPECT_NEAR(std::abs(h(1, 2)), 0.9 * half, 1e-9);
  EXPECT_NEAR(h(0, 0).real(), -7.0, 1e-12);
  EXPECT_NEAR(h(2, 2).real(), -3.0, 1e-12);
  noise.rabi_mismatch = -0.1;
  EXPECT_THROW(noise.validate(), InvalidArgument);
}

TEST(Channels, PerShotAndPerOperationAgreeWithoutNoise) {
  const CMatrix u = propagator(lift_schedule(square_pulse(kPi / 2, kPi / 2, kNominalOmega0), 3)).mat();
  const Ensemble e = fixed(u);
  const CMatrix rho0 = named_state(3, "0").density();
  const CMatrix a = evolve_ensemble({&e, &e, &e}, rho0, NoiseCorrelation::PerShot);
  const CMatrix b = evolve_ensemble({&e, &e, &e}, rho0, NoiseCorrelation::PerOperation);
  EXPECT_LT(max_abs(a - b), 1e-14);
  EXPECT_LT(max_abs(a - u * u * u * rho0 * (u * u * u).adjoint()), 1e-14);
}

TEST(Channels, PerOperationAveragesEachStep) {
  NoiseParams noise;
  noise.zeeman_sigma = kTwoPi * 2e3;
  noise.quadrature_nodes = 5;
  const Ensemble e = propagator_ensemble(square_pulse(kPi / 2, kPi / 2, kNominalOmega0), noise, kNominalOmega0, {});
  const CMatrix rho0 = named_state(3, "0").density();
  CMatrix expected = CMatrix::Zero(3, 3);
  for (const auto& a : e)
    for (const auto& b : e) expected += a.weight * b.weight * (b.u * a.u * rho0 * (b.u * a.u).adjoint());
  const CMatrix got = evolve_ensemble({&e, &e}, rho0, NoiseCorrelation::PerOperation);
  EXPECT_LT(max_abs(got - expected), 1e-13);
  EXPECT_NEAR(got.trace().real(), 1.0, 1e-13);
}

TEST(AdiabaticTransfer, DefaultParametersRegression) {
  const ScenarioReport r = run_adiabatic_transfer(AdiabaticParams{}, NoiseParams{}, {}, 100);
  EXPECT_GE(r.outputs.at("midpoint_fidelity_D"), 0.999);
  EXPECT_LT(r.outputs.at("per_op_infidelity"), 1e-3);
  EXPECT_NEAR(r.outputs.at("per_op_infidelity"), acceptance::kAdiabaticPerOpInfidelity,
              acceptance::kFrozenRelativeTolerance * acceptance::kAdiabaticPerOpInfidelity);
  EXPECT_DOUBLE_EQ(r.outputs.at("duration_us"), 1000.0);
  ASSERT_EQ(r.artifacts.size(), 1u);
  EXPECT_EQ(r.artifacts[0].table.header.back(), "p_F1");
  EXPECT_EQ(r.artifacts[0].table.rows.size(), 101u);
}

TEST(AdiabaticTransfer, FasterChirpIsDiabatic) {
  AdiabaticParams p;
  p.t_delta /= 20.0;
  p.t_omega /= 20.0;
  p.t_hold /= 20.0;
  const ScenarioReport r = run_adiabatic_transfer(p, NoiseParams{}, {}, 50);
  EXPECT_LT(r.outputs.at("midpoint_fidelity_D"), 0.99);
}

TEST(AdiabaticTransfer, ScaledFrequenciesAreMoreAdiabatic) {
  AdiabaticParams p;
  IntegratorConfig cfg;
  cfg.tolerance = 1e-7;
  double previous = single_forward_infidelity(p, cfg);
  for (double scale : {2.0, 10.0}) {
    AdiabaticParams q = p;
    q.omega0 *= scale;
    q.delta0 *= scale;
    const double inf = single_forward_infidelity(q, cfg);
    EXPECT_LT(inf, previous) << "scale " << scale;
    previous = inf;
  }
  EXPECT_LT(previous, 1e-7);
}

TEST(AdiabaticTransfer, StrongerDriveAloneSweepsMixingAngleEarly) {
  AdiabaticParams p;
  IntegratorConfig cfg;
  cfg.tolerance = 1e-7;
  const double nominal = single_forward_infidelity(p, cfg);
  p.omega0 *= 10.0;
  EXPECT_GT(single_forward_infidelity(p, cfg), nominal);
}

TEST(Tbb1, ZeroErrorAndTwentyFivePercent) {
  const ScenarioReport zero = run_tbb1(0.0);
  EXPECT_NEAR(zero.outputs.at("final_p_F1"), 1.0, 1e-8);
  EXPECT_GE(zero.outputs.at("final_fidelity_D"), 1.0 - 1e-8);
  const double f25 = run_tbb1(-kTwoPi * 10e3).outputs.at("final_fidelity_D");
  EXPECT_GE(f25, 0.99);
  const double f50 = run_tbb1(-kNominalOmega0 / 2.0).outputs.at("final_fidelity_D");
  EXPECT_LT(f50, f25);
  EXPECT_LT(f50, 0.99);
  EXPECT_THROW(run_tbb1(-kNominalOmega0), InvalidArgument);
}

TEST(PulseArea, NominalAreaTransfersFully) {
  for (PulseMethod m : {PulseMethod::Single, PulseMethod::Tbb1}) {
    const auto pts = sweep_pulse_area(m, {1.0});
    EXPECT_NEAR(pts[0].p_f1, 1.0, 1e-8);
  }
  EXPECT_THROW(sweep_pulse_area(PulseMethod::Single, {0.0}), InvalidArgument);
}

TEST(PulseArea, SinglePulseUnderRotation) {
  const auto pts = sweep_pulse_area(PulseMethod::Single, {0.9, 0.5, 1.3});
  for (const auto& p : pts) {
    const double theta = p.area * kPi / 2.0;
    EXPECT_NEAR(p.p_f1, std::pow(std::sin(theta), 2), 1e-9);
    EXPECT_NEAR(1.0 - p.fidelity, std::pow(std::cos(theta), 2), 1e-9);
  }
}

TEST(PulseArea, Tbb1Flatness) {
  const std::vector<double> areas{0.9, 0.92, 0.96, 1.0, 1.04, 1.08};
  const auto single = sweep_pulse_area(PulseMethod::Single, areas);
  const auto tbb1 = sweep_pulse_area(PulseMethod::Tbb1, areas);
  EXPECT_LT(1.0 - tbb1[0].fidelity, 0.01 * (1.0 - single[0].fidelity));
  double worst_single = 0.0, worst_tbb1 = 0.0;
  for (std::size_t i = 1; i < areas.size(); ++i) {
    worst_single = std::max(worst_single, 1.0 - single[i].fidelity);
    worst_tbb1 = std::max(worst_tbb1, 1.0 - tbb1[i].fidelity);
  }
  EXPECT_LE(worst_tbb1, 1e-2 * worst_single);
}

TEST(StaticErrors, BoundAndMonotoneGrid) {
  IntegratorConfig cfg;
  cfg.tolerance = 1e-8;
  std::vector<double> inf;
  for (int k = 0; k < 5; ++k) inf.push_back(static_error_infidelity(k * 0.015 / 4, k * kTwoPi * 30.0 / 4, {}, cfg));
  for (std::size_t k = 1; k < inf.size(); ++k) EXPECT_GT(inf[k], inf[k - 1]);
  EXPECT_NEAR(inf[0], single_forward_infidelity(AdiabaticParams{}, cfg), 1e-12);
  EXPECT_LT(static_error_infidelity(0.0015, kTwoPi * 3.0, {}, cfg), 1e-4);
}

TEST(NoiseOrdering, Tbb1ZeemanWidth) {
  TransferSetup setup;
  double previous = -1.0;
  for (double sigma : {0.0, kTwoPi * 500.0, kTwoPi * 1000.0}) {
    NoiseParams noise;
    noise.zeeman_sigma = sigma;
    noise.quadrature_nodes = 5;
    const double inf = ensemble_transfer_infidelity(TransferMethod::Tbb1, noise, setup);
    EXPECT_GE(inf, previous);
    previous = inf;
  }
}

TEST(NoiseOrdering, Tbb1RabiError) {
  double previous = -1.0;
  for (double e : {0.0, 2e3, 4e3}) {
    const double inf = run_tbb1(-kTwoPi * e).outputs.at("final_infidelity_D");
    EXPECT_GE(inf, previous);
    previous = inf;
  }
}

TEST(DarkStateMeasurementPipeline, LargeSampleMatchesExactFidelity) {
  MeasurementModel m = MeasurementModel::ideal(100000000);
  CMatrix rho = 0.9 * named_state(3, "D").density() + 0.1 * named_state(3, "0").density();
  Rng rng(12);
  const DarkStateMeasurement d = measure_dark_state(rho, m, rng);
  EXPECT_NEAR(d.exact_fd, 0.9, 1e-15);
  EXPECT_NEAR(d.fit.fd_raw, d.exact_fd, 1e-4);
}

TEST(FidelityVsN, ZeroNoiseTbb1) {
  const MeasurementModel m = MeasurementModel::ideal(200, CountMode::Expected);
  const FidelityVsN r = measure_fidelity_vs_N(TransferMethod::Tbb1, {8, 16, 32, 64}, m, NoiseParams{});
  ASSERT_EQ(r.points.size(), 4u);
  EXPECT_EQ(r.points[0].operations, 9);
  EXPECT_NEAR(r.measured.epsilon, 0.0, 1e-8);
  EXPECT_NEAR(r.injected.epsilon, 0.0, 1e-9);
  for (const auto& p : r.points) EXPECT_NEAR(p.exact_fd, 1.0, 1e-8);
  EXPECT_THROW(measure_fidelity_vs_N(TransferMethod::Tbb1, {8, 15}, m, NoiseParams{}), InvalidArgument);
}

TEST(FidelityVsN, ZeroNoiseAdiabaticMatchesIntrinsicLoss) {
  const MeasurementModel m = MeasurementModel::ideal(200, CountMode::Expected);
  const FidelityVsN r = measure_fidelity_vs_N(TransferMethod::Adiabatic, {8, 16, 32, 64}, m, NoiseParams{});
  EXPECT_LT(r.injected.epsilon, 1e-4);
  EXPECT_NEAR(r.measured.epsilon, r.injected.epsilon, 3.0 * r.measured.sigma + 1e-8);
  for (const auto& p : r.points) EXPECT_NEAR(p.fd_raw, p.exact_fd, 1e-6);
}

TEST(Ramsey, ZeroNoiseFullContrast) {
  MeasurementModel m = MeasurementModel::ideal(200, CountMode::Expected);
  TransferSetup setup;
  const auto [fwd, rev] = transfer_ensembles(TransferMethod::Adiabatic, NoiseParams{}, setup);
  for (int n : {0, 4, 8, 32}) {
    Rng rng(0);
    const RamseyResult r = ramsey_from_ensembles(n, ramsey_phases(20), m, fwd, rev, NoiseCorrelation::PerShot, rng);
    EXPECT_NEAR(r.contrast, r.exact_contrast, 1e-6) << "N=" << n;
    EXPECT_NEAR(r.exact_contrast, 1.0, 1e-3) << "N=" << n;
  }
  Rng rng(0);
  EXPECT_THROW(ramsey_from_ensembles(6, ramsey_phases(20), m, fwd, rev, NoiseCorrelation::PerShot, rng),
               InvalidArgument);
}

TEST(Ramsey, ClockRotationIsUnitary) {
  const CMatrix u = clock_rotation(kPi / 2, 0.4);
  EXPECT_LT(unitarity_defect(u), 1e-15);
  EXPECT_EQ(u(0, 0), Complex(1.0));
  EXPECT_EQ(u(2, 2), Complex(1.0));
  const CMatrix twice = clock_rotation(kPi, 0.0) * clock_rotation(kPi, 0.0);
  CMatrix expected = CMatrix::Identity(4, 4);
  expected(1, 1) = expected(3, 3) = -1.0;
  EXPECT_LT(max_abs(twice - expected), 1e-15);
}

TEST(VerifyReversal, AllDimensions) {
  for (int d = 2; d <= 8; ++d) {
    const ScenarioReport r = verify_reversal(d);
    EXPECT_TRUE(r.pass.value()) << "d=" << d;
    EXPECT_LT(r.outputs.at("max_dev"), 1e-10);
  }
  EXPECT_THROW(verify_reversal(9), InvalidDimension);
  EXPECT_THROW(verify_reversal(1), InvalidDimension);
}

TEST(VerifyReversal, FourLevelAntiDiagonal) {
  const CMatrix u = lift_unitary(0.0, kI, 4).mat();
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) EXPECT_NEAR(std::abs(u(r, s)), r + s == 3 ? 1.0 : 0.0, 1e-15);
  EXPECT_LT(phase_insensitive_distance(u, reversal_target(4)), 1e-15);
}

TEST(RotationCycle, Passes) {
  const ScenarioReport r = rotation_cycle_check();
  EXPECT_TRUE(r.pass.value());
  EXPECT_EQ(r.artifacts[0].table.rows.size(), 8u);
}

TEST(EigenScanReport, GapAndOverlap) {
  const ScenarioReport r = eigen_scan_report(kNominalOmega0, -4.0, 4.0, 0.01);
  EXPECT_NEAR(r.outputs.at("gap_at_zero_over_omega"), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_GT(r.outputs.at("min_neighbour_overlap"), 0.99);
  EXPECT_EQ(r.artifacts[0].table.rows.size(), 801u);
}

TEST(Reports, FileNamesAndJson) {
  ScenarioReport r = rotation_cycle_check();
  r.seed = 42;
  r.outputs["bad"] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(report_filename(r), "rotation-cycle_42.json");
  EXPECT_EQ(artifact_filename(r, r.artifacts[0]), "rotation-cycle_42.csv");
  EXPECT_EQ(artifact_filename(r, Artifact{"tbb1", {}}), "rotation-cycle_42_tbb1.csv");
  const nlohmann::json j = report_to_json(r);
  EXPECT_TRUE(j.at("outputs").at("bad").is_null());
  EXPECT_EQ(j.at("pass"), true);
  EXPECT_EQ(j.at("artifacts").at(0), "rotation-cycle_42.csv");

  const auto dir = std::filesystem::temp_directory_path() / "majorana_reports_test";
  std::filesystem::remove_all(dir);
  const auto files = write_report(r, dir);
  ASSERT_EQ(files.size(), 2u);
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
  const auto [header, rows] = io::parse_csv(io::read_file(dir / "rotation-cycle_42.csv"));
  EXPECT_EQ(header, r.artifacts[0].table.header);
  EXPECT_EQ(rows.size(), 8u);
  std::filesystem::remove_all(dir);
}

TEST(Determinism, RepeatedRunsAreIdentical) {
  MeasurementModel m;
  m.seed = 9;
  const auto a = measure_fidelity_vs_N(TransferMethod::Tbb1, {8, 16}, m, NoiseParams{});
  const auto b = measure_fidelity_vs_N(TransferMethod::Tbb1, {8, 16}, m, NoiseParams{});
  EXPECT_EQ(a.measured.epsilon, b.measured.epsilon);
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].fit.a0, b.points[i].fit.a0);
}
