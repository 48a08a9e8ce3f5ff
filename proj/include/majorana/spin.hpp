#pragma once

// Angular-momentum algebra for a spin-j system with d = 2j + 1 levels.
//
// Basis convention (used everywhere in the library): index k holds the
// J_z eigenstate with m = -j + k, i.e. amplitudes are ordered by increasing m.
// For d = 3 the order is (|-1>, |0>, |+1>); for d = 2 it is (|down>, |up>).
// With this ordering J_z = diag(-j, ..., +j) and the control Hamiltonian
// Omega cos(chi) Jx + Omega sin(chi) Jy + delta Jz reproduces the familiar
// two-level and V-system rotating-frame matrices entry by entry.

#include "majorana/errors.hpp"
#include "majorana/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace majorana {

inline constexpr double kStateNormTolerance = 1e-12;

/// m quantum number of basis index `k` in a d-level system.
inline double magnetic_number(int dim, int k) {
  return -0.5 * (dim - 1) + k;
}

/// Unit-norm complex amplitude vector over d >= 2 levels.
class StateVector {
 public:
  explicit StateVector(CVector amps, double tolerance = kStateNormTolerance)
      : amps_(std::move(amps)) {
    if (amps_.size() < 2) {
      throw InvalidDimension("StateVector: dimension must be at least 2");
    }
    const double norm2 = amps_.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= tolerance)) {
      throw NormalizationError("StateVector: squared norm " + std::to_string(norm2) +
                               " differs from 1");
    }
  }

  /// Rescales `amps` to unit norm; throws on the zero vector.
  static StateVector normalized(CVector amps) {
    const double n = amps.norm();
    if (n == 0.0) throw NormalizationError("StateVector: cannot normalize the zero vector");
    return StateVector(amps / n);
  }

  static StateVector basis(int dim, int index) {
    if (dim < 2) throw InvalidDimension("StateVector: dimension must be at least 2");
    if (index < 0 || index >= dim) throw LookupError("StateVector: basis index out of range");
    CVector v = CVector::Zero(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  Complex operator[](int k) const { return amps_[k]; }

  std::vector<double> populations() const {
    std::vector<double> p(amps_.size());
    for (Eigen::Index k = 0; k < amps_.size(); ++k) p[k] = std::norm(amps_[k]);
    return p;
  }

  CMatrix density() const { return amps_ * amps_.adjoint(); }

 private:
  CVector amps_;
};

/// Jx, Jy, Jz for spin j = (d - 1) / 2, hbar = 1.
struct SpinOperators {
  int dim = 0;
  CMatrix jx;
  CMatrix jy;
  CMatrix jz;

  double j() const { return 0.5 * (dim - 1); }

  /// n_x Jx + n_y Jy + n_z Jz.
  CMatrix along(const Eigen::Vector3d& n) const {
    return n.x() * jx + n.y() * jy + n.z() * jz;
  }
};

inline SpinOperators angular_momentum_ops(int dim) {
  if (dim < 2) throw InvalidDimension("angular_momentum_ops: d must be >= 2, got " + std::to_string(dim));
  const double j = 0.5 * (dim - 1);
  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; index k+1 is m+1.
  CMatrix jplus = CMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double m = magnetic_number(dim, k);
    jplus(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMatrix jminus = jplus.adjoint();

  SpinOperators ops;
  ops.dim = dim;
  ops.jx = 0.5 * (jplus + jminus);
  ops.jy = (jplus - jminus) / (2.0 * kI);
  ops.jz = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) ops.jz(k, k) = magnetic_number(dim, k);
  return ops;
}

/// Square unitary matrix; U^dagger U = I is checked on construction.
class Unitary {
 public:
  explicit Unitary(CMatrix mat, double tolerance = 1e-9) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols()) throw InvalidDimension("Unitary: matrix must be square");
    if (mat_.rows() < 1) throw InvalidDimension("Unitary: empty matrix");
    const double defect = unitarity_defect(mat_);
    if (!(defect <= tolerance)) {
      throw NormalizationError("Unitary: U^dagger U deviates from identity by " + std::to_string(defect));
    }
  }

  static Unitary identity(int dim) { return Unitary(CMatrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& mat() const { return mat_; }
  Complex operator()(int r, int c) const { return mat_(r, c); }

  Unitary adjoint() const { return Unitary(mat_.adjoint()); }

  friend Unitary operator*(const Unitary& a, const Unitary& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("Unitary product: dimension mismatch");
    return Unitary(a.mat_ * b.mat_);
  }

  StateVector apply(const StateVector& psi) const {
    if (psi.dim() != dim()) throw DimensionMismatch("Unitary::apply: dimension mismatch");
    return StateVector(mat_ * psi.amps(), 1e-9);
  }

 private:
  CMatrix mat_;
};

/// exp(-i angle (axis . J)), computed by spectral decomposition.
inline Unitary rotation_unitary(int dim, const Eigen::Vector3d& axis, double angle) {
  if (!(std::abs(axis.norm() - 1.0) <= 1e-9)) {
    throw NormalizationError("rotation_unitary: axis must be a unit vector");
  }
  const SpinOperators ops = angular_momentum_ops(dim);
  return Unitary(expm_hermitian(ops.along(axis), angle));
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

/// z^n with 0^0 = 1.
inline Complex ipow(Complex z, int n) {
  Complex result{1.0, 0.0};
  for (int i = 0; i < n; ++i) result *= z;
  return result;
}

}  // namespace detail

/// Spin-j representation of the two-level unitary [[a, -b*], [b, a*]]
/// (the operator mapping |down> to a|down> + b|up>), from the closed-form
/// binomial expansion of the symmetric-tensor representation.
inline Unitary lift_unitary(Complex a, Complex b, int dim) {
  if (dim < 2) throw InvalidDimension("lift_unitary: d must be >= 2, got " + std::to_string(dim));
  const double norm2 = std::norm(a) + std::norm(b);
  if (!(std::abs(norm2 - 1.0) <= 1e-9)) {
    throw NormalizationError("lift_unitary: |a|^2 + |b|^2 must equal 1");
  }
  const Complex a_conj = std::conj(a);
  const Complex minus_b_conj = -std::conj(b);
  CMatrix u = CMatrix::Zero(dim, dim);
  // 1-based r, s as in the closed form; q runs over the admissible range.
  for (int r = 1; r <= dim; ++r) {
    for (int s = 1; s <= dim; ++s) {
      const int q_min = std::max(0, r + s - 1 - dim);
      const int q_max = std::min(r - 1, s - 1);
      Complex sum{0.0, 0.0};
      for (int q = q_min; q <= q_max; ++q) {
        const double coeff =
            std::sqrt(detail::binomial(r - 1, q) * detail::binomial(s - 1, q) *
                      detail::binomial(dim - r, s - 1 - q) * detail::binomial(dim - s, r - 1 - q));
        sum += coeff * detail::ipow(a, dim + 1 - r - s + q) * detail::ipow(a_conj, q) *
               detail::ipow(b, r - 1 - q) * detail::ipow(minus_b_conj, s - 1 - q);
      }
      u(r - 1, s - 1) = sum;
    }
  }
  return Unitary(std::move(u));
}

/// Lift of a 2x2 special unitary, taking (a, b) from its first column.
inline Unitary lift_unitary(const Unitary& two_level, int dim) {
  if (two_level.dim() != 2) throw DimensionMismatch("lift_unitary: expected a 2x2 unitary");
  return lift_unitary(two_level(0, 0), two_level(1, 0), dim);
}

namespace detail {

inline std::string m_label(int dim, int k) {
  const int twice_m = 2 * k - (dim - 1);
  std::string sign = twice_m > 0 ? "+" : (twice_m < 0 ? "-" : "");
  const int mag = std::abs(twice_m);
  if (dim % 2 == 1) return sign + std::to_string(mag / 2);
  return sign + std::to_string(mag) + "/2";
}

}  // namespace detail

/// Label of basis index k, e.g. "-1", "0", "+1", "+3/2".
inline std::string level_label(int dim, int k) { return detail::m_label(dim, k); }

/// Basis states by m label ("-1", "0", "+1", "+3/2", ...; "1" is accepted
/// for "+1"), plus the J_x eigenstates "u", "D", "d" when d = 3.
inline StateVector named_state(int dim, std::string_view name) {
  if (dim < 2) throw InvalidDimension("named_state: d must be >= 2");
  if (dim == 3) {
    const double h = 1.0 / std::sqrt(2.0);
    CVector v(3);
    if (name == "D") {
      v << -h, 0.0, h;
      return StateVector(v);
    }
    if (name == "u") {
      v << 0.5, h, 0.5;
      return StateVector(v);
    }
    if (name == "d") {
      v << 0.5, -h, 0.5;
      return StateVector(v);
    }
  }
  for (int k = 0; k < dim; ++k) {
    const std::string label = detail::m_label(dim, k);
    if (name == label || (label.front() == '+' && name == label.substr(1))) {
      return StateVector::basis(dim, k);
    }
  }
  throw LookupError("named_state: unknown state '" + std::string(name) + "' for d=" + std::to_string(dim));
}

/// |<phi|psi>|^2.
inline double state_fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.dim() != phi.dim()) throw DimensionMismatch("state_fidelity: dimension mismatch");
  return std::min(1.0, std::norm(phi.amps().dot(psi.amps())));
}

/// <phi| rho |phi> for a density matrix rho.
inline double state_fidelity(const CMatrix& rho, const StateVector& phi) {
  if (rho.rows() != phi.dim()) throw DimensionMismatch("state_fidelity: dimension mismatch");
  return (phi.amps().adjoint() * rho * phi.amps())(0, 0).real();
}

}  // namespace majorana
