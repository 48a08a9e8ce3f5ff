#include "majorana/spin.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace majorana;

namespace {

Unitary random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(2);
  v << Complex{g(rng), g(rng)}, Complex{g(rng), g(rng)};
  v.normalize();
  CMatrix u(2, 2);
  u << v[0], -std::conj(v[1]), v[1], std::conj(v[0]);
  return Unitary(u);
}

}  // namespace

TEST(AngularMomentum, CommutatorsAndCasimir) {
  for (int d = 2; d <= 7; ++d) {
    const SpinOperators s = angular_momentum_ops(d);
    const double j = s.j();
    EXPECT_LT(max_abs(s.jx * s.jy - s.jy * s.jx - kI * s.jz), 1e-13) << "d=" << d;
    EXPECT_LT(max_abs(s.jy * s.jz - s.jz * s.jy - kI * s.jx), 1e-13) << "d=" << d;
    const CMatrix casimir = s.jx * s.jx + s.jy * s.jy + s.jz * s.jz;
    EXPECT_LT(max_abs(casimir - j * (j + 1.0) * CMatrix::Identity(d, d)), 1e-13);
    const oracle::Spin o = oracle::spin(d);
    EXPECT_LT(max_abs(s.jx - o.jx) + max_abs(s.jy - o.jy) + max_abs(s.jz - o.jz), 1e-15);
  }
}

TEST(AngularMomentum, RejectsSmallDimension) {
  EXPECT_THROW(angular_momentum_ops(1), InvalidDimension);
  EXPECT_THROW(StateVector::basis(1, 0), InvalidDimension);
}

TEST(StateVectorType, NormChecked) {
  CVector v(3);
  v << 1.0, 1.0, 0.0;
  EXPECT_THROW(StateVector{v}, NormalizationError);
  EXPECT_THROW(StateVector::normalized(CVector::Zero(3)), NormalizationError);
  const StateVector s = StateVector::normalized(v);
  EXPECT_NEAR(s.populations()[0], 0.5, 1e-15);
  EXPECT_THROW(StateVector::basis(3, 3), LookupError);
}

TEST(RotationUnitary, ZeroAngleIsIdentity) {
  for (int d = 2; d <= 6; ++d) {
    const Unitary u = rotation_unitary(d, Eigen::Vector3d(0.6, 0.0, 0.8), 0.0);
    EXPECT_LT(max_abs(u.mat() - CMatrix::Identity(d, d)), 1e-14);
  }
}

TEST(RotationUnitary, QuarterTurnAboutYFromZero) {
  const Unitary u = rotation_unitary(3, Eigen::Vector3d::UnitY(), kPi / 2.0);
  EXPECT_NEAR(state_fidelity(u.apply(named_state(3, "0")), named_state(3, "D")), 1.0, 1e-14);
  EXPECT_NEAR(state_fidelity(u.apply(named_state(3, "+1")), named_state(3, "u")), 1.0, 1e-14);
}

TEST(RotationUnitary, MatchesSeriesExponential) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d = 2; d <= 6; ++d) {
    const Eigen::Vector3d axis = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
    const double angle = 3.0 * u(rng);
    const oracle::Spin o = oracle::spin(d);
    const CMatrix ref = oracle::expm_series(-kI * angle * (axis.x() * o.jx + axis.y() * o.jy + axis.z() * o.jz));
    EXPECT_LT(max_abs(rotation_unitary(d, axis, angle).mat() - ref), 1e-12);
  }
}

TEST(RotationUnitary, RejectsNonUnitAxis) {
  EXPECT_THROW(rotation_unitary(3, Eigen::Vector3d(1.0, 1.0, 0.0), 1.0), NormalizationError);
}

TEST(LiftUnitary, ThreeLevelHalfTurnColumns) {
  const double h = 1.0 / std::sqrt(2.0);
  const Unitary u = lift_unitary(h, h, 3);
  CMatrix expected(3, 3);
  expected << 0.5, -h, 0.5, h, 0.0, -h, 0.5, h, 0.5;
  EXPECT_LT(max_abs(u.mat() - expected), 1e-15);
  EXPECT_NEAR(state_fidelity(u.apply(named_state(3, "0")), named_state(3, "D")), 1.0, 1e-15);
}

TEST(LiftUnitary, IdentityForTrivialPair) {
  for (int d = 2; d <= 8; ++d) EXPECT_EQ(max_abs(lift_unitary(1.0, 0.0, d).mat() - CMatrix::Identity(d, d)), 0.0);
}

TEST(LiftUnitary, TwoLevelIsTheInputMatrix) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Unitary u2 = random_su2(rng);
    EXPECT_LT(max_abs(lift_unitary(u2, 2).mat() - u2.mat()), 1e-15);
  }
}

TEST(LiftUnitary, FiveLevelReversalIsAntiDiagonal) {
  const Unitary u = lift_unitary(0.0, kI, 5);
  CMatrix anti = CMatrix::Zero(5, 5);
  for (int r = 0; r < 5; ++r) anti(r, 4 - r) = -1.0;
  // Equal to -delta_{6, r+s} up to the global phase -1.
  EXPECT_LT(phase_insensitive_distance(u.mat(), anti), 1e-15);
  EXPECT_LT(max_abs(u.mat() + anti), 1e-15);
}

TEST(LiftUnitary, MatchesGeneratorExponential) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Unitary u2 = random_su2(rng);
    for (int d = 2; d <= 6; ++d) {
      EXPECT_LT(max_abs(lift_unitary(u2, d).mat() - oracle::lift_by_generator(u2.mat(), d)), 1e-11)
          << "sample " << i << " d=" << d;
    }
  }
}

TEST(LiftUnitary, Homomorphism) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Unitary a = random_su2(rng);
    const Unitary b = random_su2(rng);
    for (int d = 2; d <= 6; ++d) {
      EXPECT_LT(max_abs(lift_unitary(a * b, d).mat() - (lift_unitary(a, d) * lift_unitary(b, d)).mat()), 1e-10);
    }
  }
}

TEST(LiftUnitary, ConsistentWithRotationAboutY) {
  // exp(-i theta Jy) has first column (cos theta/2, -sin theta/2) in this basis.
  for (double theta : {0.3, 1.0, kPi / 2.0, 2.5, kPi}) {
    for (int d = 2; d <= 6; ++d) {
      const Unitary lifted = lift_unitary(std::cos(theta / 2.0), -std::sin(theta / 2.0), d);
      const Unitary rotated = rotation_unitary(d, Eigen::Vector3d::UnitY(), theta);
      EXPECT_LT(phase_insensitive_distance(lifted.mat(), rotated.mat()), 1e-10);
    }
  }
}

TEST(LiftUnitary, RejectsUnnormalisedPair) {
  EXPECT_THROW(lift_unitary(1.0, 1.0, 3), NormalizationError);
  EXPECT_THROW(lift_unitary(1.0, 0.0, 1), InvalidDimension);
}

TEST(LiftUnitary, ResultIsUnitary) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Unitary u2 = random_su2(rng);
    for (int d = 2; d <= 8; ++d) EXPECT_LT(unitarity_defect(lift_unitary(u2, d).mat()), 1e-12);
  }
}

TEST(RotationCycles, QuarterTurnsFromZeroAndPlusOne) {
  const Unitary step = rotation_unitary(3, Eigen::Vector3d::UnitY(), kPi / 2.0);
  StateVector psi = named_state(3, "0");
  for (const char* name : {"D", "0", "D", "0"}) {
    psi = step.apply(psi);
    EXPECT_NEAR(state_fidelity(psi, named_state(3, name)), 1.0, 1e-10) << name;
  }
  psi = named_state(3, "+1");
  for (const char* name : {"u", "-1", "d", "+1"}) {
    psi = step.apply(psi);
    EXPECT_NEAR(state_fidelity(psi, named_state(3, name)), 1.0, 1e-10) << name;
  }
}

TEST(NamedState, ThreeLevelStates) {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector d = named_state(3, "D");
  EXPECT_EQ(d[0], Complex(-h));
  EXPECT_EQ(d[1], Complex(0.0));
  EXPECT_EQ(d[2], Complex(h));
  const StateVector u = named_state(3, "u");
  EXPECT_EQ(u[0], Complex(0.5));
  EXPECT_EQ(u[1], Complex(h));
  EXPECT_EQ(u[2], Complex(0.5));
  const StateVector z = named_state(3, "0");
  EXPECT_EQ(z[1], Complex(1.0));
  EXPECT_EQ(named_state(3, "1").amps(), named_state(3, "+1").amps());
  EXPECT_EQ(named_state(4, "+3/2")[3], Complex(1.0));
  EXPECT_EQ(named_state(2, "-1/2")[0], Complex(1.0));
}

TEST(NamedState, UnknownLabels) {
  EXPECT_THROW(named_state(4, "D"), LookupError);
  EXPECT_THROW(named_state(3, "x"), LookupError);
  EXPECT_THROW(named_state(3, "+2"), LookupError);
}

TEST(NamedState, JxEigenstates) {
  const SpinOperators s = angular_momentum_ops(3);
  const std::vector<std::pair<const char*, double>> cases{{"u", 1.0}, {"D", 0.0}, {"d", -1.0}};
  for (const auto& [name, m] : cases) {
    const CVector v = named_state(3, name).amps();
    EXPECT_LT((s.jx * v - m * v).norm(), 1e-15) << name;
  }
}

TEST(StateFidelity, Examples) {
  const StateVector zero = named_state(3, "0");
  const StateVector dark = named_state(3, "D");
  EXPECT_DOUBLE_EQ(state_fidelity(dark, dark), 1.0);
  EXPECT_DOUBLE_EQ(state_fidelity(zero, dark), 0.0);

  const oracle::Spin o = oracle::spin(3);
  const CVector rotated = oracle::expm_series(-kI * (kPi / 4.0) * o.jy) * zero.amps();
  const double expected = std::norm(rotated[1]);
  const StateVector psi = rotation_unitary(3, Eigen::Vector3d::UnitY(), kPi / 4.0).apply(zero);
  EXPECT_NEAR(state_fidelity(zero, psi), expected, 1e-14);
  EXPECT_NEAR(expected, 0.5, 1e-14);
}

TEST(StateFidelity, SymmetricAndChecked) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int i = 0; i < 10; ++i) {
    CVector a(4), b(4);
    for (int k = 0; k < 4; ++k) {
      a[k] = Complex{g(rng), g(rng)};
      b[k] = Complex{g(rng), g(rng)};
    }
    const StateVector x = StateVector::normalized(a);
    const StateVector y = StateVector::normalized(b);
    EXPECT_NEAR(state_fidelity(x, y), state_fidelity(y, x), 1e-15);
    EXPECT_NEAR(state_fidelity(x.density(), y), state_fidelity(x, y), 1e-14);
  }
  EXPECT_THROW(state_fidelity(named_state(3, "0"), named_state(2, "+1/2")), DimensionMismatch);
}

TEST(UnitaryType, RejectsNonUnitary) {
  EXPECT_THROW(Unitary(CMatrix::Constant(2, 2, 1.0)), NormalizationError);
  EXPECT_THROW(Unitary(CMatrix::Identity(2, 3)), InvalidDimension);
  EXPECT_THROW(Unitary::identity(2) * Unitary::identity(3), DimensionMismatch);
}

TEST(Labels, MagneticNumbers) {
  EXPECT_EQ(level_label(3, 0), "-1");
  EXPECT_EQ(level_label(3, 1), "0");
  EXPECT_EQ(level_label(3, 2), "+1");
  EXPECT_EQ(level_label(4, 0), "-3/2");
  EXPECT_DOUBLE_EQ(magnetic_number(6, 5), 2.5);
}
