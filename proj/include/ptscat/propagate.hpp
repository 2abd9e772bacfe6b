#pragma once
/**
 * @brief Transfer matrices for -f'' + q f = k^2 f.
 *
 * M(k) maps Cauchy data (f(-rho), f'(-rho)) to (f(rho), f'(rho)).
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "ptscat/mat2.hpp"
#include "ptscat/potential.hpp"

namespace ptscat {

/// Wavenumber in the closed upper half-plane.  Im k > 0, or Im k = 0 with
/// Re k != 0 (the real-axis limit).
class Wavenumber {
 public:
  Wavenumber(cplx k) : k_(k) {  // NOLINT(google-explicit-constructor)
    if (!is_finite(k)) throw DomainError("wavenumber must be finite");
    if (k.imag() < 0.0) throw DomainError("wavenumber must satisfy Im k >= 0, got " + describe(k));
    if (k.imag() == 0.0 && k.real() == 0.0) throw DomainError("wavenumber k = 0 is excluded");
  }
  Wavenumber(double re) : Wavenumber(cplx{re, 0.0}) {}  // NOLINT(google-explicit-constructor)
  Wavenumber(double re, double im) : Wavenumber(cplx{re, im}) {}

  [[nodiscard]] cplx value() const { return k_; }
  [[nodiscard]] double re() const { return k_.real(); }
  [[nodiscard]] double im() const { return k_.imag(); }
  [[nodiscard]] bool in_c_plus_prime() const { return k_.real() != 0.0; }
  [[nodiscard]] bool on_real_axis() const { return k_.imag() == 0.0; }

  /// k -> -conj(k), the reflection pairing used by every symmetry relation.
  [[nodiscard]] Wavenumber reflected() const { return Wavenumber(-std::conj(k_)); }

  static std::string describe(cplx k) {
    std::ostringstream os;
    os.precision(17);
    os << "k = " << k.real() << (k.imag() < 0 ? " - " : " + ") << std::abs(k.imag()) << "i";
    return os.str();
  }

 private:
  cplx k_;
};

inline constexpr double overflow_limit = 1e300;

/// Exact propagator of -f'' + v f = k^2 f across length L with constant v.
/// Entries cos(kL), sin(kL)/k, -k sin(kL) are even in kappa = sqrt(k^2 - v),
/// so they are evaluated from kappa^2 directly.
inline Mat2C segment_matrix(cplx v, cplx k, double length) {
  const cplx kappa_sq = k * k - v;
  const cplx z_sq = kappa_sq * length * length;
  cplx c, s_over;  // cos(z), sin(z)/z
  if (std::abs(z_sq) < 1e-8) {
    c = 1.0 - z_sq / 2.0 + z_sq * z_sq / 24.0;
    s_over = 1.0 - z_sq / 6.0 + z_sq * z_sq / 120.0;
  } else {
    const cplx z = std::sqrt(z_sq);
    c = std::cos(z);
    s_over = std::sin(z) / z;
  }
  const cplx s = length * s_over;  // sin(kappa L) / kappa
  return {c, s, -kappa_sq * s, c};
}

namespace detail {
inline void check_overflow(const Mat2C& m, cplx k) {
  if (!m.finite() || m.max_abs() > overflow_limit)
    throw Overflow("transfer matrix overflow at " + Wavenumber::describe(k));
}

inline Mat2C point_jump(double gamma) {
  const cplx e = cplx{2.0, gamma} / cplx{2.0, -gamma};
  return Mat2C::diag(e, 1.0 / e);
}
}  // namespace detail

/// Default step count for sampled profiles: one per sample interval, at least 64.
inline int default_steps(const Potential& q) {
  if (const auto* s = std::get_if<shape::Sampled>(&q.shape()))
    return std::max<int>(64, static_cast<int>(s->values.size()) - 1);
  return 64;
}

/// Midpoint (one-point Magnus) product for sampled potentials.
inline Mat2C transfer_matrix_sampled(const Potential& q, const Wavenumber& k, int steps) {
  if (steps < 1) throw InvalidPotential("transfer_matrix_sampled: steps must be >= 1");
  if (!q.is<shape::Sampled>()) throw InvalidPotential("transfer_matrix_sampled: potential is not sampled");
  const double rho = q.rho();
  const double h = 2.0 * rho / steps;
  Mat2C m = Mat2C::identity();
  for (int j = 0; j < steps; ++j) {
    const double x_mid = -rho + (j + 0.5) * h;
    m = segment_matrix(q(x_mid), k.value(), h) * m;
  }
  detail::check_overflow(m, k.value());
  return m;
}

inline Mat2C transfer_matrix(const Potential& q, const Wavenumber& k) {
  const cplx kv = k.value();
  const double rho = q.rho();
  const Mat2C m = std::visit(
      [&](const auto& s) -> Mat2C {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shape::Free>) {
          return segment_matrix(0.0, kv, 2.0 * rho);
        } else if constexpr (std::is_same_v<T, shape::PointInteraction>) {
          const Mat2C half = segment_matrix(0.0, kv, rho);
          return half * detail::point_jump(s.gamma) * half;
        } else if constexpr (std::is_same_v<T, shape::PiecewiseConstant>) {
          Mat2C acc = Mat2C::identity();
          double x = -rho;
          for (const auto& seg : s.segments) {
            if (seg.lo > x) acc = segment_matrix(0.0, kv, seg.lo - x) * acc;
            acc = segment_matrix(seg.value, kv, seg.hi - seg.lo) * acc;
            x = seg.hi;
          }
          if (rho > x) acc = segment_matrix(0.0, kv, rho - x) * acc;
          return acc;
        } else {
          return transfer_matrix_sampled(q, k, default_steps(q));
        }
      },
      q.shape());
  detail::check_overflow(m, kv);
  return m;
}

}  // namespace ptscat
