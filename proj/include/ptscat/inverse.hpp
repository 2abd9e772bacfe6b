#pragma once
/**
 * @brief Recovery of the metric e^Q from S-matrix samples.
 *
 * Q is restricted to chi * sigma2, the only Hermitian matrices that
 * anticommute with P = sigma1 and with conjugation.  chi minimizes
 *
 *   f(chi) = sum_j || e^{chi s2} S_j(-conj k) - S_j(k)^* e^{chi s2} ||_F^2,
 *
 * which has the form a + b cosh(2chi) + c sinh(2chi) and is convex when b > |c|.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptscat/mat2.hpp"
#include "ptscat/smatrix.hpp"

namespace ptscat {

struct MetricSample {
  cplx k{};
  Mat2C s_k;
  Mat2C s_mkbar;
};

struct MetricEstimate {
  double chi = 0.0;
  Mat2C eQ = Mat2C::identity();
  double fit_residual = 0.0;
  std::optional<double> beta_implied;
};

struct COperator {
  Mat2C eQ;
  Mat2C C;
  std::string description;
};

/// Pairs each ok sample at k with the ok sample at -conj(k).
/// `samples` must come from the symmetrized grid `g`.
inline std::vector<MetricSample> pair_samples(const std::vector<SMatrixSample>& samples, const KGrid& g) {
  std::vector<MetricSample> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[g.mirror(i)];
    if (samples[i].ok() && p.ok()) out.push_back({samples[i].k, samples[i].S, p.S});
  }
  return out;
}

/// e^{chi sigma2} = cosh(chi) sigma0 + sinh(chi) sigma2.
inline Mat2C metric_from_chi(double chi) {
  return std::cosh(chi) * pauli::sigma0 + std::sinh(chi) * pauli::sigma2;
}

/// Orthogonal projection of the Hermitian part onto real multiples of sigma2.
inline Mat2C constrain_Q(const Mat2C& candidate) {
  const PauliCoefficients p = pauli_decompose(hermitian_part(candidate));
  return p[2].real() * pauli::sigma2;
}

/// C = e^{-chi sigma2} sigma1 = cosh(chi) sigma1 + i sinh(chi) sigma3.
inline COperator c_operator(double chi) {
  const Mat2C eq = metric_from_chi(chi);
  const Mat2C c = metric_from_chi(-chi) * pauli::sigma1;
  return {eq, c,
          "C = exp(-i chi P R) P = cosh(chi) P + i sinh(chi) R, with P -> sigma1 (parity) and "
          "R -> sigma3 (sign of x) on C^2"};
}

namespace detail {
struct FitTerms {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Objective and its first two chi-derivatives.  With G = e^{chi s2},
/// dG/dchi = s2 G and d2G/dchi2 = G, so E'' = E.
inline FitTerms fit_terms(double chi, std::span<const MetricSample> samples) {
  const Mat2C g = metric_from_chi(chi);
  const Mat2C dg = pauli::sigma2 * g;
  FitTerms t;
  for (const auto& s : samples) {
    const Mat2C b = mat2_adjoint(s.s_k);
    const Mat2C e = g * s.s_mkbar - b * g;
    const Mat2C de = dg * s.s_mkbar - b * dg;
    const double ee = frobenius_norm_sq(e);
    const double ede = (std::conj(e.a11) * de.a11 + std::conj(e.a12) * de.a12 + std::conj(e.a21) * de.a21 +
                        std::conj(e.a22) * de.a22)
                           .real();
    t.value += ee;
    t.d1 += 2.0 * ede;
    t.d2 += 2.0 * (frobenius_norm_sq(de) + ee);
  }
  return t;
}
}  // namespace detail

inline double metric_fit_objective(double chi, std::span<const MetricSample> samples) {
  return detail::fit_terms(chi, samples).value;
}

inline constexpr double chi_bracket = 20.0;

inline MetricEstimate recover_metric(std::span<const MetricSample> samples) {
  if (samples.empty()) throw DegenerateFit("recover_metric: no samples");
  for (const auto& s : samples)
    if (!s.s_k.finite() || !s.s_mkbar.finite()) throw Error("recover_metric: non-finite S sample");

  // f(chi) = a + b cosh 2chi + c sinh 2chi, read off from three evaluations.
  const double f0 = metric_fit_objective(0.0, samples);
  const double fp = metric_fit_objective(1.0, samples);
  const double fm = metric_fit_objective(-1.0, samples);
  const double b = (0.5 * (fp + fm) - f0) / (std::cosh(2.0) - 1.0);
  const double c = (fp - fm) / (2.0 * std::sinh(2.0));
  const double scale = 1.0 + std::abs(f0) + std::abs(fp) + std::abs(fm);
  if (std::abs(b) + std::abs(c) <= 1e-13 * scale)
    throw DegenerateFit("recover_metric: objective does not depend on chi");
  if (!(b > std::abs(c))) throw DegenerateFit("recover_metric: objective has no interior minimum in chi");

  // Golden section on [-20, 20].
  constexpr double inv_phi = 0.6180339887498949;
  double lo = -chi_bracket, hi = chi_bracket;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = metric_fit_objective(x1, samples), f2 = metric_fit_objective(x2, samples);
  while (hi - lo > 1e-9) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = metric_fit_objective(x1, samples);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = metric_fit_objective(x2, samples);
    }
  }
  double chi = 0.5 * (lo + hi);
  // Far out the objective is flat to rounding, so a minimum near the edge is not trusted.
  if (std::abs(chi) > chi_bracket - 1.0)
    throw DegenerateFit("recover_metric: objective has no interior minimum in chi");

  // Newton polish on f'(chi) = 0.
  for (int it = 0; it < 50; ++it) {
    const auto t = detail::fit_terms(chi, samples);
    if (!(t.d2 > 0.0)) break;
    const double step = t.d1 / t.d2;
    const double next = chi - step;
    if (!(std::abs(next) < chi_bracket)) break;
    if (metric_fit_objective(next, samples) > t.value * (1.0 + 1e-12) + 1e-300) break;
    chi = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(chi))) break;
  }

  MetricEstimate est;
  est.chi = chi;
  est.eQ = metric_from_chi(chi);
  est.fit_residual = std::sqrt(metric_fit_objective(chi, samples) / static_cast<double>(samples.size()));
  est.beta_implied = std::asin(std::tanh(chi));
  return est;
}

/// Unconstrained check: fit a general Hermitian metric G = sum g_a sigma_a
/// (unit coefficient vector) and report what the symmetry constraints discard.
struct GeneralMetricDiagnostic {
  std::array<double, 4> eigenvalues{};    ///< of the normal matrix, ascending
  int null_dimension = 0;                 ///< eigenvalues <= 1e-12 * trace
  std::array<double, 4> metric_pauli{};   ///< best general metric, unit norm, g0 >= 0
  bool positive_definite = false;
  std::array<double, 4> q_pauli{};        ///< log of the metric scaled to det 1
  double discarded_fraction = 0.0;        ///< |(q1, q3)| / |q|, mass outside span{sigma2}
  double general_residual = 0.0;
};

inline GeneralMetricDiagnostic diagnose_general_metric(std::span<const MetricSample> samples) {
  if (samples.empty()) throw DegenerateFit("diagnose_general_metric: no samples");
  const std::array<Mat2C, 4> basis{pauli::sigma0, pauli::sigma1, pauli::sigma2, pauli::sigma3};

  Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
  for (const auto& s : samples) {
    const Mat2C b = mat2_adjoint(s.s_k);
    std::array<Mat2C, 4> e;
    for (std::size_t a = 0; a < 4; ++a) e[a] = basis[a] * s.s_mkbar - b * basis[a];
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t c = 0; c < 4; ++c) {
        const Mat2C prod = mat2_adjoint(e[a]) * e[c];
        normal(static_cast<int>(a), static_cast<int>(c)) += prod.trace().real();
      }
  }

  GeneralMetricDiagnostic d;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(normal);
  const Eigen::Vector4d lambda = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(normal.trace(), 1e-300);
  for (int i = 0; i < 4; ++i) {
    d.eigenvalues[static_cast<std::size_t>(i)] = lambda(i);
    if (lambda(i) <= cutoff) ++d.null_dimension;
  }

  // Within the (near-)null space pick the metric closest to span{s0, s2}.
  const int dim = std::max(1, d.null_dimension);
  const Eigen::MatrixXd v = eig.eigenvectors().leftCols(dim);
  Eigen::Vector4d g;
  if (dim == 1) {
    g = v.col(0);
  } else {
    Eigen::MatrixXd off = v.transpose() * Eigen::Vector4d(0, 1, 0, 1).asDiagonal() * v;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub(off);
    g = v * sub.eigenvectors().col(0);
  }
  g.normalize();
  if (g(0) < 0) g = -g;
  for (int i = 0; i < 4; ++i) d.metric_pauli[static_cast<std::size_t>(i)] = g(i);
  d.general_residual = std::sqrt(std::max(0.0, g.dot(normal * g)) / static_cast<double>(samples.size()));

  const double vnorm = g.tail<3>().norm();
  d.positive_definite = g(0) > vnorm;
  if (d.positive_definite && vnorm > 0.0) {
    // G / sqrt(det G) = exp(atanh(|v|/g0) vhat . sigma)
    const double t = std::atanh(vnorm / g(0));
    for (int i = 1; i < 4; ++i) d.q_pauli[static_cast<std::size_t>(i)] = t * g(i) / vnorm;
    d.discarded_fraction = std::hypot(d.q_pauli[1], d.q_pauli[3]) / std::abs(t);
  } else if (!d.positive_definite) {
    d.discarded_fraction = std::hypot(g(1), g(3)) / std::max(g.norm(), 1e-300);
  }
  return d;
}

}  // namespace ptscat
