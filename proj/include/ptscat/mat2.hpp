#pragma once
/**
 * @brief 2x2 complex linear algebra and the Pauli basis.
 *
 * Everything here is closed form; no iterative eigen solvers.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "ptscat/errors.hpp"

namespace ptscat {

using cplx = std::complex<double>;

inline constexpr cplx I_unit{0.0, 1.0};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Row-major 2x2 complex matrix.
struct Mat2C {
  cplx a11{}, a12{}, a21{}, a22{};

  static constexpr Mat2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2C zero() { return {}; }
  static constexpr Mat2C diag(cplx d1, cplx d2) { return {d1, 0.0, 0.0, d2}; }

  [[nodiscard]] bool finite() const {
    return is_finite(a11) && is_finite(a12) && is_finite(a21) && is_finite(a22);
  }

  [[nodiscard]] double max_abs() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
  }

  [[nodiscard]] cplx det() const { return a11 * a22 - a12 * a21; }
  [[nodiscard]] cplx trace() const { return a11 + a22; }

  Mat2C& operator+=(const Mat2C& o) {
    a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
    return *this;
  }
  Mat2C& operator-=(const Mat2C& o) {
    a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
    return *this;
  }
  Mat2C& operator*=(cplx s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
  }

  friend bool operator==(const Mat2C&, const Mat2C&) = default;
};

/// Column vector in C^2. First coordinate is e_+ (right half-line), second e_-.
struct Vec2C {
  cplx v1{}, v2{};
};

/// Entries must be finite; use for matrices built from external input.
inline Mat2C make_mat2(cplx a11, cplx a12, cplx a21, cplx a22) {
  Mat2C m{a11, a12, a21, a22};
  if (!m.finite()) throw Error("Mat2C: non-finite entry");
  return m;
}

inline Mat2C operator+(Mat2C a, const Mat2C& b) { return a += b; }
inline Mat2C operator-(Mat2C a, const Mat2C& b) { return a -= b; }
inline Mat2C operator-(const Mat2C& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
inline Mat2C operator*(cplx s, Mat2C a) { return a *= s; }
inline Mat2C operator*(Mat2C a, cplx s) { return a *= s; }

inline Mat2C mat2_mul(const Mat2C& a, const Mat2C& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
inline Mat2C operator*(const Mat2C& a, const Mat2C& b) { return mat2_mul(a, b); }

inline Vec2C operator*(const Mat2C& a, const Vec2C& x) {
  return {a.a11 * x.v1 + a.a12 * x.v2, a.a21 * x.v1 + a.a22 * x.v2};
}

/// Threshold below which |det A| counts as zero: 1e-14 * max(1, max|a_ij|^2).
inline double singularity_threshold(const Mat2C& a) {
  const double m = a.max_abs();
  return 1e-14 * std::max(1.0, m * m);
}

inline bool is_singular(const Mat2C& a) { return std::abs(a.det()) <= singularity_threshold(a); }

inline Mat2C mat2_inv(const Mat2C& a) {
  const cplx d = a.det();
  if (!(std::abs(d) > singularity_threshold(a))) throw SingularMatrix("mat2_inv: singular matrix");
  return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

inline Mat2C mat2_adjoint(const Mat2C& a) {
  return {std::conj(a.a11), std::conj(a.a21), std::conj(a.a12), std::conj(a.a22)};
}

/// Entrywise complex conjugation (the image of time reversal on C^2).
inline Mat2C mat2_conj(const Mat2C& a) {
  return {std::conj(a.a11), std::conj(a.a12), std::conj(a.a21), std::conj(a.a22)};
}

inline Mat2C mat2_transpose(const Mat2C& a) { return {a.a11, a.a21, a.a12, a.a22}; }

inline double frobenius_norm_sq(const Mat2C& a) {
  return std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22);
}

inline double frobenius_norm(const Mat2C& a) { return std::sqrt(frobenius_norm_sq(a)); }

/// Largest singular value.  The eigenvalues of A*A are
/// (|A|_F^2 +- sqrt(|A|_F^4 - 4|det A|^2)) / 2.
inline double operator_norm(const Mat2C& a) {
  const double m = a.max_abs();
  if (m == 0.0) return 0.0;
  const Mat2C s = (1.0 / m) * a;
  // Largest eigenvalue of s^* s; the mean/hypot split keeps near-equal singular values exact.
  const double h11 = std::norm(s.a11) + std::norm(s.a21);
  const double h22 = std::norm(s.a12) + std::norm(s.a22);
  const cplx h12 = std::conj(s.a11) * s.a12 + std::conj(s.a21) * s.a22;
  return m * std::sqrt(0.5 * (h11 + h22) + std::hypot(0.5 * (h11 - h22), std::abs(h12)));
}

/// Smallest singular value, |det| / operator norm.
inline double min_singular_value(const Mat2C& a) {
  const double smax = operator_norm(a);
  if (smax == 0.0) return 0.0;
  return std::abs(a.det()) / smax;
}

inline Mat2C hermitian_part(const Mat2C& a) { return 0.5 * (a + mat2_adjoint(a)); }

/// Eigenvalues (ascending) of the Hermitian part of `a`.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2C& a) {
  const Mat2C h = hermitian_part(a);
  const double mean = 0.5 * (h.a11.real() + h.a22.real());
  const double half_diff = 0.5 * (h.a11.real() - h.a22.real());
  const double r = std::hypot(half_diff, std::abs(h.a12));
  return {mean - r, mean + r};
}

namespace pauli {
inline constexpr Mat2C sigma0{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2C sigma1{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2C sigma2{0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0};
inline constexpr Mat2C sigma3{1.0, 0.0, 0.0, -1.0};
}  // namespace pauli

/// Coefficients of A = c0 s0 + c1 s1 + c2 s2 + c3 s3.
struct PauliCoefficients {
  std::array<cplx, 4> c{};

  cplx& operator[](std::size_t i) { return c[i]; }
  const cplx& operator[](std::size_t i) const { return c[i]; }
};

inline PauliCoefficients pauli_decompose(const Mat2C& a) {
  return {{0.5 * (a.a11 + a.a22), 0.5 * (a.a12 + a.a21), 0.5 * I_unit * (a.a12 - a.a21),
           0.5 * (a.a11 - a.a22)}};
}

inline Mat2C pauli_compose(const PauliCoefficients& p) {
  return {p[0] + p[3], p[1] - I_unit * p[2], p[1] + I_unit * p[2], p[0] - p[3]};
}

inline std::ostream& operator<<(std::ostream& os, const Mat2C& a) {
  return os << "((" << a.a11 << ", " << a.a12 << "), (" << a.a21 << ", " << a.a22 << "))";
}

}  // namespace ptscat
