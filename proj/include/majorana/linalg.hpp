#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace majorana {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// exp(-i * tau * H) for Hermitian H, via the spectral decomposition of H.
/// The result is unitary to machine precision regardless of |tau * H|.
inline CMatrix expm_hermitian(const CMatrix& hermitian, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  const RVector& values = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();
  CVector phases(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    phases[k] = std::polar(1.0, -tau * values[k]);
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |U^dagger U - I|.
inline double unitarity_defect(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

/// Global phase e^{i phi} that best aligns `b` onto `a`, from trace(b^dagger a).
inline Complex best_phase(const CMatrix& a, const CMatrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  if (std::abs(overlap) == 0.0) return Complex{1.0, 0.0};
  return overlap / std::abs(overlap);
}

/// max-abs entrywise deviation between `a` and `b` after removing the best
/// global phase. Works for matrices and (as single-column matrices) vectors.
inline double phase_insensitive_distance(const CMatrix& a, const CMatrix& b) {
  return max_abs(a - best_phase(a, b) * b);
}

}  // namespace majorana
