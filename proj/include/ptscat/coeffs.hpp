#pragma once
/**
 * @brief Generalized reflection/transmission coefficients at complex k.
 *
 * The traveling-wave solutions use the incident waves exp(-i conj(k) x)
 * (from the right) and exp(i conj(k) x) (from the left):
 *
 *   f1 = exp(-i k* x) + Rr exp(ikx)  (x >= rho),   Tr exp(-ikx)            (x <= -rho)
 *   f2 = Tl exp(ikx)                 (x >= rho),   exp(i k* x) + Rl exp(-ikx) (x <= -rho)
 *
 * Inside [-rho, rho] both solve the homogeneous equation, so the Cauchy
 * data at the two ends are linked by the transfer matrix.
 */

#include <cmath>
#include <complex>
#include <numbers>

#include "ptscat/mat2.hpp"
#include "ptscat/potential.hpp"
#include "ptscat/propagate.hpp"

namespace ptscat {

struct ScatteringCoefficients {
  Wavenumber k;
  double rho = 0.0;
  cplx Rl{}, Rr{}, Tl{}, Tr{};
};

/// f(rho), f'(rho), f(-rho), f'(-rho) of one solution.
struct EndpointValues {
  cplx value_plus{}, deriv_plus{}, value_minus{}, deriv_minus{};
};

/// Endpoint data of f1 (incident from the right) and f2 (incident from the left).
struct BoundaryData {
  Wavenumber k;
  double rho = 0.0;
  EndpointValues f1, f2;
};

/// beta = 2 atan(gamma/2), the principal argument of (2+i gamma)/(2-i gamma).
inline double beta_from_gamma(double gamma) { return 2.0 * std::atan(gamma / 2.0); }

inline ScatteringCoefficients scattering_coefficients(const Potential& q, const Wavenumber& k) {
  if (!k.in_c_plus_prime())
    throw DomainError("scattering coefficients need Re k != 0, got " + Wavenumber::describe(k.value()));
  const Mat2C m = transfer_matrix(q, k);
  const cplx kv = k.value();
  const cplx kb = std::conj(kv);
  const double rho = q.rho();

  // Unknowns are scaled by exp(ik rho) so the system columns are O(|k|).
  const Vec2C a{1.0, I_unit * kv};
  const Vec2C mb = m * Vec2C{1.0, -I_unit * kv};
  const Mat2C sys{a.v1, -mb.v1, a.v2, -mb.v2};
  if (is_singular(sys))
    throw SingularMatching("matching system singular at " + Wavenumber::describe(kv));
  const Mat2C inv = mat2_inv(sys);

  const cplx e_out = std::exp(-I_unit * kb * rho);
  const Vec2C x1 = inv * Vec2C{-e_out, I_unit * kb * e_out};
  const Vec2C x2 = inv * (m * Vec2C{e_out, I_unit * kb * e_out});

  const cplx scale = std::exp(-I_unit * kv * rho);
  ScatteringCoefficients c{k, rho};
  c.Rr = x1.v1 * scale;
  c.Tr = x1.v2 * scale;
  c.Tl = x2.v1 * scale;
  c.Rl = x2.v2 * scale;
  if (!(is_finite(c.Rr) && is_finite(c.Tr) && is_finite(c.Tl) && is_finite(c.Rl)))
    throw Overflow("scattering coefficients overflow at " + Wavenumber::describe(kv));
  return c;
}

/// Closed-form coefficients of the point interaction H_gamma (rho = 0).
inline ScatteringCoefficients point_interaction_coefficients(double gamma, const Wavenumber& k) {
  if (std::abs(gamma) == 2.0)
    throw WholePlaneSpectrum("point interaction with |gamma| = 2 has spectrum equal to C");
  if (!k.in_c_plus_prime())
    throw DomainError("scattering coefficients need Re k != 0, got " + Wavenumber::describe(k.value()));
  const double beta = beta_from_gamma(gamma);
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const cplx kv = k.value();
  const cplx denom = kv * cb;
  ScatteringCoefficients c{k, 0.0};
  c.Tl = c.Tr = k.re() / denom;
  c.Rr = I_unit * (k.re() * sb - k.im() * cb) / denom;
  c.Rl = -I_unit * (k.re() * sb + k.im() * cb) / denom;
  return c;
}

}  // namespace ptscat
