#pragma once
/**
 * @brief Numerical residuals of the S-matrix symmetry relations.
 *
 * P acts on C^2 as sigma1, T as entrywise conjugation.  All residuals are
 * operator norms.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ptscat/mat2.hpp"
#include "ptscat/smatrix.hpp"

namespace ptscat {

struct RelationResiduals {
  double pt_relation = 0.0;
  double hermitian_analyticity = 0.0;
  double contraction_excess = 0.0;
  double metric_intertwining = 0.0;
  double metric_contraction_min_eig = 0.0;
};

struct MetricResiduals {
  double intertwining = 0.0;
  double min_eig = 0.0;
};

/// || S(k) - sigma1 conj(S(-conj k)) sigma1 ||
inline double check_pt_relation(const Mat2C& s_k, const Mat2C& s_mkbar) {
  using pauli::sigma1;
  return operator_norm(s_k - sigma1 * mat2_conj(s_mkbar) * sigma1);
}

/// || S(-conj k) - S(k)^* ||
inline double check_hermitian_analyticity(const Mat2C& s_k, const Mat2C& s_mkbar) {
  return operator_norm(s_mkbar - mat2_adjoint(s_k));
}

inline double check_contraction(const Mat2C& s_k) { return std::max(0.0, operator_norm(s_k) - 1.0); }

/// || S^* S - I ||, meaningful for real k.
inline double check_unitarity(const Mat2C& s_k) {
  return operator_norm(mat2_adjoint(s_k) * s_k - Mat2C::identity());
}

inline void require_positive_definite(const Mat2C& m) {
  const double scale = std::max(1.0, m.max_abs());
  if (operator_norm(m - mat2_adjoint(m)) > 1e-12 * scale)
    throw NotPositiveDefinite("metric is not Hermitian");
  if (!(hermitian_eigenvalues(m)[0] > 0.0)) throw NotPositiveDefinite("metric is not positive definite");
}

/// (i) e^Q S(-conj k) = S^*(k) e^Q and (ii) e^Q - S^*(k) e^Q S(k) >= 0.
inline MetricResiduals check_metric_relations(const Mat2C& s_k, const Mat2C& s_mkbar, const Mat2C& eq) {
  require_positive_definite(eq);
  const Mat2C s_adj = mat2_adjoint(s_k);
  return {operator_norm(eq * s_mkbar - s_adj * eq), hermitian_eigenvalues(eq - s_adj * eq * s_k)[0]};
}

/// Largest entrywise |(d/dx + i d/dy) F| / 2 by central differences at k.
/// Vanishes for F analytic in k.
template <class Fn>
double cauchy_riemann_residual(Fn&& fn, cplx k, double h = 1e-4) {
  const Mat2C dx = (1.0 / (2.0 * h)) * (fn(k + cplx{h, 0.0}) - fn(k - cplx{h, 0.0}));
  const Mat2C dy = (1.0 / (2.0 * h)) * (fn(k + cplx{0.0, h}) - fn(k - cplx{0.0, h}));
  return 0.5 * (dx + I_unit * dy).max_abs();
}

enum class Relation { pt, hermitian, contraction, unitarity, metric };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::pt: return "pt";
    case Relation::hermitian: return "hermitian";
    case Relation::contraction: return "contraction";
    case Relation::unitarity: return "unitarity";
    case Relation::metric: return "metric";
  }
  return "?";
}

inline std::optional<Relation> parse_relation(std::string_view s) {
  for (Relation r : {Relation::pt, Relation::hermitian, Relation::contraction, Relation::unitarity, Relation::metric})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

struct Tolerances {
  double route = 1e-8;
  double pt = 1e-8;
  double hermitian = 1e-8;
  double contraction = 1e-10;
  double unitarity = 1e-8;
  double intertwining = 1e-10;
  double min_eig = 1e-10;
};

struct PairResidual {
  cplx k{};
  RelationResiduals residuals;
};

struct RelationSummary {
  std::string name;
  double worst = 0.0;   ///< max residual; for metric_min_eig the most negative eigenvalue
  double median = 0.0;
  double tolerance = 0.0;
  std::size_t count = 0;
  bool passed = true;
};

struct VerificationReport {
  std::vector<PairResidual> pairs;
  std::vector<RelationSummary> summaries;
  std::size_t skipped_points = 0;  ///< grid points without an ok partner
  std::size_t ok_points = 0;

  [[nodiscard]] bool all_passed() const {
    return std::all_of(summaries.begin(), summaries.end(), [](const auto& s) { return s.passed; });
  }
};

namespace detail {
inline RelationSummary summarize(std::string name, std::vector<double> values, double tol, bool lower_bound) {
  RelationSummary s{std::move(name), 0.0, 0.0, tol, values.size(), true};
  if (values.empty()) {
    s.passed = false;  // no evidence
    return s;
  }
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  s.median = *mid;
  if (lower_bound) {
    s.worst = *std::min_element(values.begin(), values.end());
    s.passed = s.worst >= -tol;
  } else {
    s.worst = *std::max_element(values.begin(), values.end());
    s.passed = s.worst <= tol;
  }
  return s;
}
}  // namespace detail

/// Evaluates the selected relations over a grid symmetrized under k -> -conj(k).
/// `metric` is required when Relation::metric is selected.
inline VerificationReport verify_grid(const Potential& q, const KGrid& grid, const std::set<Relation>& relations,
                                      const Tolerances& tol, const std::optional<Mat2C>& metric = std::nullopt,
                                      GridOptions opt = {}) {
  if (relations.count(Relation::metric) && !metric)
    throw ConfigError("verify: the metric relation needs an e^Q matrix");
  if (metric) require_positive_definite(*metric);
  opt.route_tolerance = tol.route;

  const KGrid g = grid.symmetrized();
  const auto samples = smatrix_grid(q, g, opt);

  VerificationReport rep;
  std::vector<double> pt, herm, contr, inter, mineig, unit;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!s.ok()) continue;
    ++rep.ok_points;
    const auto& partner = samples[g.mirror(i)];
    if (!partner.ok()) {
      ++rep.skipped_points;
      continue;
    }
    PairResidual pr{s.k, {}};
    auto& r = pr.residuals;
    r.pt_relation = check_pt_relation(s.S, partner.S);
    r.hermitian_analyticity = check_hermitian_analyticity(s.S, partner.S);
    r.contraction_excess = check_contraction(s.S);
    if (relations.count(Relation::pt)) pt.push_back(r.pt_relation);
    if (relations.count(Relation::hermitian)) herm.push_back(r.hermitian_analyticity);
    if (relations.count(Relation::contraction)) contr.push_back(r.contraction_excess);
    if (metric) {
      const auto m = check_metric_relations(s.S, partner.S, *metric);
      r.metric_intertwining = m.intertwining;
      r.metric_contraction_min_eig = m.min_eig;
      if (relations.count(Relation::metric)) {
        inter.push_back(m.intertwining);
        mineig.push_back(m.min_eig);
      }
    }
    rep.pairs.push_back(pr);
  }

  if (relations.count(Relation::unitarity)) {
    for (int i = 0; i < g.n_re; ++i) {
      if (g.re(i) == 0.0) continue;
      const auto s = smatrix_at(q, {g.re(i), 0.0}, opt);
      if (s.ok()) unit.push_back(check_unitarity(s.S));
    }
  }

  if (relations.count(Relation::pt)) rep.summaries.push_back(detail::summarize("pt", pt, tol.pt, false));
  if (relations.count(Relation::hermitian))
    rep.summaries.push_back(detail::summarize("hermitian", herm, tol.hermitian, false));
  if (relations.count(Relation::contraction))
    rep.summaries.push_back(detail::summarize("contraction", contr, tol.contraction, false));
  if (relations.count(Relation::unitarity))
    rep.summaries.push_back(detail::summarize("unitarity", unit, tol.unitarity, false));
  if (relations.count(Relation::metric)) {
    rep.summaries.push_back(detail::summarize("metric_intertwining", inter, tol.intertwining, false));
    rep.summaries.push_back(detail::summarize("metric_min_eig", mineig, tol.min_eig, true));
  }
  return rep;
}

}  // namespace ptscat
