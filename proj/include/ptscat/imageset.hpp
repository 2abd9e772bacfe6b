#pragma once
/**
 * @brief The image-set matrix T_k and the determinant Delta_k.
 *
 * T_k is fixed by the boundary condition
 *
 *   T_k (f(rho) + f'(rho), f(-rho) - f'(-rho))^T = 1/2 (f(rho), f(-rho))^T
 *
 * imposed on the two traveling-wave solutions f1, f2.  The primary
 * construction solves that 2x2 system; tk_closed_form evaluates the
 * explicit t_ij expressions and serves as an independent cross-check.
 *
 * Coordinates: first component <-> e_+ <-> right half-line.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ptscat/coeffs.hpp"
#include "ptscat/mat2.hpp"

namespace ptscat {

struct TkMatrix {
  Wavenumber k;
  Mat2C tk;
  cplx delta{};
  double bc_residual = 0.0;
};

struct BoundaryTripletCoords {
  Vec2C gamma0;
  Vec2C gamma1;
};

namespace detail {
/// theta = 1 + ik, e^{i alpha} = conj(theta)/theta, e^{i phi} = exp(-2i rho Re k).
struct ImageSetPhases {
  cplx theta, e_alpha, e_phi;
};

inline ImageSetPhases image_set_phases(const Wavenumber& k, double rho) {
  const cplx theta = 1.0 + I_unit * k.value();
  return {theta, std::conj(theta) / theta, std::exp(-2.0 * I_unit * rho * k.re())};
}

inline Mat2C delta_matrix(const ScatteringCoefficients& c) {
  const auto ph = image_set_phases(c.k, c.rho);
  const cplx eap = ph.e_alpha * ph.e_phi;
  return {c.Rr + eap, c.Tr, c.Tl, c.Rl + eap};
}

inline double bc_residual(const Mat2C& tk, const BoundaryData& bd) {
  double worst = 0.0;
  for (const EndpointValues* f : {&bd.f1, &bd.f2}) {
    const Vec2C lhs = tk * Vec2C{f->value_plus + f->deriv_plus, f->value_minus - f->deriv_minus};
    worst = std::max(worst, std::hypot(std::abs(lhs.v1 - 0.5 * f->value_plus),
                                       std::abs(lhs.v2 - 0.5 * f->value_minus)));
  }
  return worst;
}
}  // namespace detail

/// Evaluates the traveling-wave expressions and their x-derivatives at +-rho.
inline BoundaryData traveling_wave_boundary_values(const ScatteringCoefficients& c) {
  const cplx k = c.k.value();
  const cplx kb = std::conj(k);
  const cplx e_in = std::exp(I_unit * k * c.rho);
  const cplx e_out = std::exp(-I_unit * kb * c.rho);
  BoundaryData bd{c.k, c.rho, {}, {}};
  bd.f1 = {e_out + c.Rr * e_in, -I_unit * kb * e_out + I_unit * k * c.Rr * e_in, c.Tr * e_in,
           -I_unit * k * c.Tr * e_in};
  bd.f2 = {c.Tl * e_in, I_unit * k * c.Tl * e_in, e_out + c.Rl * e_in,
           I_unit * kb * e_out - I_unit * k * c.Rl * e_in};
  return bd;
}

/// Inverse of traveling_wave_boundary_values (reads off the four amplitudes).
inline ScatteringCoefficients coefficients_from_boundary_data(const BoundaryData& bd) {
  const cplx k = bd.k.value();
  const cplx e_in = std::exp(I_unit * k * bd.rho);
  const cplx e_out = std::exp(-I_unit * std::conj(k) * bd.rho);
  ScatteringCoefficients c{bd.k, bd.rho};
  c.Rr = (bd.f1.value_plus - e_out) / e_in;
  c.Tr = bd.f1.value_minus / e_in;
  c.Tl = bd.f2.value_plus / e_in;
  c.Rl = (bd.f2.value_minus - e_out) / e_in;
  return c;
}

/// Delta_k = det((Rr + e^{i(alpha+phi)}, Tr), (Tl, Rl + e^{i(alpha+phi)})).
inline cplx delta_k(const ScatteringCoefficients& c) { return detail::delta_matrix(c).det(); }

/// True when |Delta_k| is below the scale-aware singularity threshold.
inline bool delta_is_singular(const ScatteringCoefficients& c) {
  return is_singular(detail::delta_matrix(c));
}

inline TkMatrix tk_from_boundary_data(const BoundaryData& bd, const Wavenumber& k) {
  const EndpointValues& f1 = bd.f1;
  const EndpointValues& f2 = bd.f2;
  const Mat2C a{f1.value_plus + f1.deriv_plus, f2.value_plus + f2.deriv_plus,
                f1.value_minus - f1.deriv_minus, f2.value_minus - f2.deriv_minus};
  const Mat2C f{f1.value_plus, f2.value_plus, f1.value_minus, f2.value_minus};
  if (is_singular(a))
    throw SingularImageSet("image-set system singular at " + Wavenumber::describe(k.value()));
  const ScatteringCoefficients c = coefficients_from_boundary_data(bd);
  if (delta_is_singular(c))
    throw SingularImageSet("Delta_k vanishes at " + Wavenumber::describe(k.value()));
  const Mat2C tk = 0.5 * (f * mat2_inv(a));
  return {k, tk, delta_k(c), detail::bc_residual(tk, bd)};
}

/// Explicit t_ij in terms of the scattering coefficients.
inline TkMatrix tk_closed_form(const ScatteringCoefficients& c) {
  if (!c.k.in_c_plus_prime())
    throw DomainError("tk_closed_form needs Re k != 0, got " + Wavenumber::describe(c.k.value()));
  if (delta_is_singular(c))
    throw SingularImageSet("Delta_k vanishes at " + Wavenumber::describe(c.k.value()));
  const auto ph = detail::image_set_phases(c.k, c.rho);
  const cplx eap = ph.e_alpha * ph.e_phi;
  const cplx delta = delta_k(c);
  const cplx pre = 1.0 / (2.0 * ph.theta * delta);
  const cplx g = ph.e_phi * (ph.e_alpha - 1.0);
  const Mat2C tk{pre * (delta - g * (c.Rl + eap)), pre * c.Tl * g, pre * c.Tr * g,
                 pre * (delta - g * (c.Rr + eap))};
  return {c.k, tk, delta, detail::bc_residual(tk, traveling_wave_boundary_values(c))};
}

/// Boundary-triplet coordinates in the (e_+, e_-) basis:
/// gamma0 = (sqrt2/2)(f(rho), f(-rho)), gamma1 = sqrt2 (f(rho)+f'(rho), f(-rho)-f'(-rho)).
inline BoundaryTripletCoords boundary_triplet_coords(const Vec2C& values, const Vec2C& derivs) {
  constexpr double r2 = std::numbers::sqrt2;
  return {{0.5 * r2 * values.v1, 0.5 * r2 * values.v2},
          {r2 * (values.v1 + derivs.v1), r2 * (values.v2 - derivs.v2)}};
}

inline BoundaryTripletCoords boundary_triplet_coords(const EndpointValues& f) {
  return boundary_triplet_coords({f.value_plus, f.value_minus}, {f.deriv_plus, f.deriv_minus});
}

}  // namespace ptscat
