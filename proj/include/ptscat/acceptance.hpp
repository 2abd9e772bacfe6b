#pragma once
/**
 * @brief End-to-end acceptance checks, shared by the acceptance test binary
 * and `ptscat selftest`.
 */

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ptscat/coeffs.hpp"
#include "ptscat/imageset.hpp"
#include "ptscat/inverse.hpp"
#include "ptscat/potential.hpp"
#include "ptscat/propagate.hpp"
#include "ptscat/smatrix.hpp"
#include "ptscat/verify.hpp"

namespace ptscat::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Re k in [-2, 2] (20 nodes, none at 0), Im k in [0.1, 2] (20 nodes).
inline KGrid standard_grid() { return {-2.0, 2.0, 20, 0.1, 2.0, 20}; }

inline Potential square_well() { return Potential::piecewise(1.0, {{-0.5, 0.5, 2.0}}); }

/// q = 1.5 i sgn(x) on (-0.5, 0.5), rho = 1.
inline Potential pt_well() {
  return Potential::piecewise(1.0, {{-0.5, 0.0, cplx{0.0, -1.5}}, {0.0, 0.5, cplx{0.0, 1.5}}});
}

/// Smooth complex profile sampled on 2001 nodes of [-1, 1].
inline Potential smooth_sampled() {
  std::vector<cplx> v;
  const int n = 2001;
  for (int j = 0; j < n; ++j) {
    const double x = -1.0 + 2.0 * j / (n - 1);
    v.emplace_back(3.0 * std::exp(-4.0 * x * x), 0.8 * x * std::exp(-3.0 * x * x));
  }
  return Potential::sampled(1.0, std::move(v));
}

inline Mat2C point_smatrix_closed_form(double gamma) {
  const double beta = beta_from_gamma(gamma);
  const cplx t = I_unit * std::tan(beta);
  const double sec = 1.0 / std::cos(beta);
  return -Mat2C{t, sec, sec, -t};
}

namespace detail {
inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline CriterionResult timed(int id, std::string title, const std::function<bool(std::string&)>& body) {
  CriterionResult r{id, std::move(title), false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  r.passed = body(r.detail);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<SMatrixSample> sweep(const Potential& q, const KGrid& g, Route route) {
  GridOptions opt;
  opt.route = route;
  opt.route_tolerance = std::numeric_limits<double>::infinity();
  opt.threads = 1;
  return smatrix_grid(q, g, opt);
}

/// Max deviation of ok samples from `expected(k)`; counts ok samples.
template <class Fn>
double max_deviation(const std::vector<SMatrixSample>& samples, Fn&& expected, std::size_t& ok_count) {
  double worst = 0.0;
  ok_count = 0;
  for (const auto& s : samples) {
    if (!s.ok()) continue;
    ++ok_count;
    worst = std::max(worst, operator_norm(s.S - expected(s.k)));
  }
  return worst;
}

inline TkMatrix tk_at(const Potential& q, cplx k) {
  const Wavenumber w(k);
  return tk_from_boundary_data(traveling_wave_boundary_values(scattering_coefficients(q, w)), w);
}
}  // namespace detail

inline CriterionResult point_interaction_constant() {
  return detail::timed(1, "point-interaction S-matrix is the constant closed form (gamma = 1)", [](std::string& msg) {
    const Potential q = Potential::point(1.0);
    const Mat2C expected{-cplx{0.0, 4.0 / 3.0}, -5.0 / 3.0, -5.0 / 3.0, cplx{0.0, 4.0 / 3.0}};
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t n_c = 0, n_t = 0;
    const double dc = detail::max_deviation(detail::sweep(q, standard_grid(), Route::coeffs),
                                            [&](cplx) { return expected; }, n_c);
    const double dt = detail::max_deviation(detail::sweep(q, standard_grid(), Route::tk),
                                            [&](cplx) { return expected; }, n_t);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    msg = "coeffs max dev " + detail::sci(dc) + " over " + std::to_string(n_c) + " ok, tk max dev " +
          detail::sci(dt) + " over " + std::to_string(n_t) + " ok, " + detail::sci(secs) + " s";
    return n_c > 0 && n_t > 0 && dc <= 1e-10 && dt <= 1e-8 && secs < 1.0;
  });
}

inline CriterionResult singular_coupling() {
  return detail::timed(2, "gamma = +-2 yields singular status at every point", [](std::string& msg) {
    bool good = true;
    std::size_t total = 0;
    for (double gamma : {2.0, -2.0}) {
      for (Route route : {Route::coeffs, Route::tk, Route::both}) {
        for (const auto& s : detail::sweep(Potential::point(gamma), standard_grid(), route)) {
          ++total;
          const bool singular =
              s.status == SampleStatus::singular_delta || s.status == SampleStatus::singular_bracket;
          if (!singular || s.S.finite()) good = false;
        }
      }
      try {
        point_interaction_coefficients(gamma, Wavenumber(1.0, 1.0));
        good = false;
      } catch (const WholePlaneSpectrum&) {
      }
    }
    msg = std::to_string(total) + " samples checked";
    return good;
  });
}

inline CriterionResult metric_recovery() {
  return detail::timed(3, "metric recovery: tanh(chi) = sin(beta), metric intertwining and contraction hold", [](std::string& msg) {
    const auto t0 = std::chrono::steady_clock::now();
    const KGrid g = KGrid{-2.0, 2.0, 8, 0.1, 2.0, 5}.symmetrized();
    double worst_tanh = 0.0, worst_inter = 0.0, worst_eig = 0.0;
    bool good = true;
    for (double gamma : {-1.5, -0.5, 0.5, 1.0, 1.5}) {
      const auto samples = detail::sweep(Potential::point(gamma), g, Route::both);
      const auto ms = pair_samples(samples, g);
      if (ms.empty()) return false;
      const MetricEstimate est = recover_metric(ms);
      worst_tanh = std::max(worst_tanh, std::abs(std::tanh(est.chi) - std::sin(beta_from_gamma(gamma))));
      for (const auto& s : ms) {
        const auto r = check_metric_relations(s.s_k, s.s_mkbar, est.eQ);
        worst_inter = std::max(worst_inter, r.intertwining);
        worst_eig = std::min(worst_eig, r.min_eig);
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    good = worst_tanh <= 1e-8 && worst_inter <= 1e-10 && worst_eig >= -1e-10 && secs < 1.0;
    msg = "max |tanh chi - sin beta| " + detail::sci(worst_tanh) + ", max intertwining " + detail::sci(worst_inter) +
          ", min eig " + detail::sci(worst_eig) + ", " + detail::sci(secs) + " s";
    return good;
  });
}

inline CriterionResult free_continuation() {
  return detail::timed(4, "free potential: S(k) = -exp(2ik rho) sigma1 by both routes", [](std::string& msg) {
    double worst = 0.0;
    std::size_t ok_total = 0;
    for (double rho : {0.0, 0.5, 1.0}) {
      for (Route route : {Route::coeffs, Route::tk}) {
        std::size_t n = 0;
        worst = std::max(worst, detail::max_deviation(
                                    detail::sweep(Potential::free(rho), standard_grid(), route),
                                    [&](cplx k) { return -std::exp(2.0 * I_unit * k * rho) * pauli::sigma1; }, n));
        ok_total += n;
        if (n != standard_grid().size()) return false;
      }
    }
    msg = "max dev " + detail::sci(worst) + " over " + std::to_string(ok_total) + " samples";
    return worst <= 1e-10;
  });
}

inline CriterionResult route_equivalence() {
  return detail::timed(5, "coefficient and T_k routes agree", [](std::string& msg) {
    const std::vector<std::pair<std::string, Potential>> cases{{"free", Potential::free(1.0)},
                                                               {"square well", square_well()},
                                                               {"point", Potential::point(1.0)},
                                                               {"PT well", pt_well()}};
    double worst = 0.0;
    std::size_t ok = 0;
    for (const auto& [name, q] : cases)
      for (const auto& s : detail::sweep(q, standard_grid(), Route::both)) {
        if (s.status == SampleStatus::route_mismatch) return false;
        if (!s.ok()) continue;
        ++ok;
        worst = std::max(worst, s.route_disagreement);
      }
    msg = "max |S_coeffs - S_tk| " + detail::sci(worst) + " over " + std::to_string(ok) + " ok samples";
    return ok > 0 && worst <= 1e-8;
  });
}

inline CriterionResult self_adjoint_properties() {
  return detail::timed(6, "real well: contraction, hermitian analyticity, unitarity", [](std::string& msg) {
    const Potential q = square_well();
    const KGrid g = standard_grid().symmetrized();
    const auto s = detail::sweep(q, g, Route::both);
    double norm_excess = 0.0, herm = 0.0, unit = 0.0;
    std::size_t pairs = 0, real_pts = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].ok()) continue;
      norm_excess = std::max(norm_excess, operator_norm(s[i].S) - 1.0);
      const auto& p = s[g.mirror(i)];
      if (!p.ok()) continue;
      ++pairs;
      herm = std::max(herm, check_hermitian_analyticity(s[i].S, p.S));
    }
    for (int i = 0; i < 41; ++i) {
      const double kr = -2.0 + 0.1 * i;
      if (i == 20) continue;
      const auto r = smatrix_at(q, {kr, 0.0});
      if (!r.ok()) return false;
      ++real_pts;
      unit = std::max(unit, check_unitarity(r.S));
    }
    msg = "norm - 1 <= " + detail::sci(norm_excess) + ", hermitian " + detail::sci(herm) + " (" +
          std::to_string(pairs) + " pairs), unitarity " + detail::sci(unit) + " (" + std::to_string(real_pts) +
          " real k)";
    return pairs > 0 && norm_excess <= 1e-10 && herm <= 1e-8 && unit <= 1e-8;
  });
}

inline CriterionResult pt_relation() {
  return detail::timed(7, "PT relation S(k) = sigma1 conj(S(-conj k)) sigma1", [](std::string& msg) {
    const KGrid g = standard_grid().symmetrized();
    double worst = 0.0;
    std::size_t pairs = 0;
    for (const Potential& q : {pt_well(), Potential::point(1.0)}) {
      const auto s = detail::sweep(q, g, Route::both);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& p = s[g.mirror(i)];
        if (!s[i].ok() || !p.ok()) continue;
        ++pairs;
        worst = std::max(worst, check_pt_relation(s[i].S, p.S));
      }
    }
    msg = "max residual " + detail::sci(worst) + " over " + std::to_string(pairs) + " pairs";
    return pairs > 0 && worst <= 1e-8;
  });
}

inline CriterionResult propagation() {
  return detail::timed(8, "det(transfer) = 1 and second-order sampled integrator", [](std::string& msg) {
    const std::vector<Potential> cases{Potential::free(1.0), Potential::point(1.0, 0.5), square_well(), pt_well(),
                                       smooth_sampled()};
    const KGrid g = standard_grid();
    double worst_det = 0.0;
    for (const auto& q : cases)
      for (std::size_t i = 0; i < g.size(); ++i)
        worst_det = std::max(worst_det, std::abs(transfer_matrix(q, Wavenumber(g.at(i))).det() - 1.0));

    const Potential q = smooth_sampled();
    const Wavenumber k(1.3, 0.4);
    const Mat2C ref = transfer_matrix_sampled(q, k, 100000);
    const double e1 = operator_norm(transfer_matrix_sampled(q, k, 50) - ref);
    const double e2 = operator_norm(transfer_matrix_sampled(q, k, 100) - ref);
    const double order = std::log2(e1 / e2);
    msg = "max |det - 1| " + detail::sci(worst_det) + ", measured order " + std::to_string(order);
    return worst_det <= 1e-10 && order >= 1.9;
  });
}

inline CriterionResult image_set_symmetries() {
  return detail::timed(9, "image-set symmetries of T_k", [](std::string& msg) {
    const KGrid g = standard_grid();
    double adj = 0.0, pt = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx k = g.at(i);
      const cplx km = -std::conj(k);
      adj = std::max(adj, operator_norm(mat2_adjoint(detail::tk_at(square_well(), k).tk) -
                                        detail::tk_at(square_well(), km).tk));
      for (const Potential& q : {pt_well(), Potential::point(1.0)}) {
        const Mat2C lhs = pauli::sigma1 * mat2_conj(detail::tk_at(q, k).tk) * pauli::sigma1;
        pt = std::max(pt, operator_norm(lhs - detail::tk_at(q, km).tk));
      }
    }
    msg = "||T_k^* - T_{-conj k}|| " + detail::sci(adj) + ", ||s1 conj(T_k) s1 - T_{-conj k}|| " + detail::sci(pt);
    return adj <= 1e-8 && pt <= 1e-8;
  });
}

/// Runs every criterion; a criterion that throws counts as failed.
inline std::vector<CriterionResult> run_all() {
  const std::vector<std::function<CriterionResult()>> all{
      point_interaction_constant, singular_coupling, metric_recovery,
      free_continuation,          route_equivalence, self_adjoint_properties,
      pt_relation,                propagation,       image_set_symmetries};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      out.push_back(all[i]());
    } catch (const std::exception& e) {
      out.push_back({static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false,
                     std::string("exception: ") + e.what(), 0.0});
    }
  }
  return out;
}

}  // namespace ptscat::acceptance
