#pragma once

// Reference computations that share no code with the library: a Taylor
// series exponential, closed-form SU(2) rotations and explicit matrices.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline const Complex kI{0.0, 1.0};

/// exp(A) by scaling and squaring around a truncated Taylor series.
inline Matrix expm_series(const Matrix& a, int terms = 30) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix x = a / std::ldexp(1.0, squarings);
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Jx, Jy, Jz in the increasing-m basis, built from the ladder elements.
struct Spin {
  Matrix jx, jy, jz;
};

inline Spin spin(int dim) {
  const double j = 0.5 * (dim - 1);
  Spin s;
  s.jx = Matrix::Zero(dim, dim);
  s.jy = Matrix::Zero(dim, dim);
  s.jz = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = -j + k;
    s.jz(k, k) = m;
    if (k + 1 < dim) {
      const double c = 0.5 * std::sqrt((j - m) * (j + m + 1.0));
      s.jx(k + 1, k) = s.jx(k, k + 1) = c;
      s.jy(k + 1, k) = -kI * c;
      s.jy(k, k + 1) = kI * c;
    }
  }
  return s;
}

/// exp(-i t (hx Jx + hy Jy + hz Jz)) for spin 1/2 in closed form.
inline Matrix su2_step(double hx, double hy, double hz, double t) {
  const double h = std::sqrt(hx * hx + hy * hy + hz * hz);
  Matrix u(2, 2);
  if (h == 0.0) return Matrix::Identity(2, 2);
  const double c = std::cos(0.5 * h * t);
  const double s = std::sin(0.5 * h * t);
  const double nx = hx / h, ny = hy / h, nz = hz / h;
  u(0, 0) = Complex{c, s * nz};
  u(1, 1) = Complex{c, -s * nz};
  u(0, 1) = -kI * s * Complex{nx, ny};
  u(1, 0) = -kI * s * Complex{nx, -ny};
  return u;
}

/// Resonant R(theta, phi) for spin 1/2.
inline Matrix su2_rotation(double theta, double phi) {
  return su2_step(std::cos(phi), std::sin(phi), 0.0, theta);
}

/// The d-level image of a 2x2 special unitary, via its rotation generator.
inline Matrix lift_by_generator(const Matrix& u2, int dim) {
  const Complex a = u2(0, 0);
  const Complex b = u2(1, 0);
  const double sx = -b.imag(), sy = -b.real(), sz = a.imag();
  const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
  if (s == 0.0) {
    // U = +-I; the angle is 0 or 2 pi about any axis.
    const Spin sp = spin(dim);
    return expm_series(-kI * (a.real() > 0 ? 0.0 : 2.0 * kPi) * sp.jz);
  }
  const double theta = 2.0 * std::atan2(s, a.real());
  const Spin sp = spin(dim);
  return expm_series(-kI * (theta / s) * (sx * sp.jx + sy * sp.jy + sz * sp.jz));
}

/// min over global phase of max |a - e^{i t} b|.
inline double phase_distance(const Matrix& a, const Matrix& b) {
  const Complex tr = (b.adjoint() * a).trace();
  const Complex ph = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex{1.0, 0.0};
  return (a - ph * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
