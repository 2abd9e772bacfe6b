#pragma once
/**
 * @brief S(k) on the closed upper half-plane by two routes.
 *
 *  - tk route:     S = [I - 2(1-ik)T_k] [I - 2(1+ik)T_k]^{-1}
 *  - coeffs route: S = -e^{2i rho Re k} (k / Re k) ((Rr + c, Tl), (Tr, Rl + c)),
 *                  c = e^{-2i rho Re k} (k - conj k) / (2k)
 *
 * On the real axis the coefficient route reduces to -e^{2i rho k} ((Rr, Tl), (Tr, Rl)).
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ptscat/coeffs.hpp"
#include "ptscat/imageset.hpp"
#include "ptscat/mat2.hpp"
#include "ptscat/potential.hpp"
#include "ptscat/propagate.hpp"

namespace ptscat {

enum class Route { coeffs, tk, both };

enum class SampleStatus {
  ok,
  singular_delta,
  singular_bracket,
  excluded_axis,
  overflow,
  route_mismatch,
};

inline std::string_view to_string(Route r) {
  switch (r) {
    case Route::coeffs: return "coeffs";
    case Route::tk: return "tk";
    case Route::both: return "both";
  }
  return "?";
}

inline std::string_view to_string(SampleStatus s) {
  switch (s) {
    case SampleStatus::ok: return "ok";
    case SampleStatus::singular_delta: return "singular_delta";
    case SampleStatus::singular_bracket: return "singular_bracket";
    case SampleStatus::excluded_axis: return "excluded_axis";
    case SampleStatus::overflow: return "overflow";
    case SampleStatus::route_mismatch: return "route_mismatch";
  }
  return "?";
}

inline std::optional<Route> parse_route(std::string_view s) {
  if (s == "coeffs") return Route::coeffs;
  if (s == "tk") return Route::tk;
  if (s == "both") return Route::both;
  return std::nullopt;
}

struct SMatrixSample {
  cplx k{};
  Mat2C S = {nan_c(), nan_c(), nan_c(), nan_c()};
  cplx delta{nan_c()};
  Route route = Route::both;
  double route_disagreement = 0.0;
  SampleStatus status = SampleStatus::ok;

  [[nodiscard]] bool ok() const { return status == SampleStatus::ok; }

  static constexpr cplx nan_c() {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
};

inline Mat2C smatrix_from_tk(const TkMatrix& t) {
  const cplx k = t.k.value();
  const Mat2C id = Mat2C::identity();
  const Mat2C bracket = id - (2.0 * (1.0 + I_unit * k)) * t.tk;
  if (is_singular(bracket))
    throw SMatrixNonexistent("I - 2(1+ik)T_k is singular at " + Wavenumber::describe(k));
  return (id - (2.0 * (1.0 - I_unit * k)) * t.tk) * mat2_inv(bracket);
}

inline Mat2C smatrix_from_coeffs(const ScatteringCoefficients& c) {
  const Wavenumber& k = c.k;
  if (!k.in_c_plus_prime())
    throw DomainError("coefficient route undefined on the imaginary axis, " + Wavenumber::describe(k.value()));
  const cplx kv = k.value();
  if (k.on_real_axis()) {
    const cplx pre = -std::exp(2.0 * I_unit * c.rho * kv);
    return pre * Mat2C{c.Rr, c.Tl, c.Tr, c.Rl};
  }
  const cplx phase = std::exp(2.0 * I_unit * c.rho * k.re());
  // (k - conj k)/(2k) = i Im k / k
  const cplx corr = std::conj(phase) * (I_unit * k.im()) / kv;
  const cplx pre = -phase * kv / k.re();
  return pre * Mat2C{c.Rr + corr, c.Tl, c.Tr, c.Rl + corr};
}

/// Rectangular grid; samples are ordered row-major with Im k as the row index.
struct KGrid {
  double re_min = -1.0, re_max = 1.0;
  int n_re = 1;
  double im_min = 0.0, im_max = 1.0;
  int n_im = 1;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n_re) * n_im; }

  /// Endpoint-exact and mirror-exact: re(n-1-i) == -re(i) whenever re_min == -re_max.
  static double node(double lo, double hi, int n, int i) {
    if (n == 1) return lo;
    return ((n - 1 - i) * lo + i * hi) / (n - 1);
  }
  [[nodiscard]] double re(int i) const { return node(re_min, re_max, n_re, i); }
  [[nodiscard]] double im(int j) const { return node(im_min, im_max, n_im, j); }
  [[nodiscard]] cplx at(std::size_t idx) const {
    const int j = static_cast<int>(idx / n_re);
    const int i = static_cast<int>(idx % n_re);
    return {re(i), im(j)};
  }

  void validate() const {
    if (n_re < 1 || n_im < 1) throw ConfigError("grid: n and m must be >= 1");
    if (!(std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) && std::isfinite(im_max)))
      throw ConfigError("grid: bounds must be finite");
    if (im_min < 0.0 || im_max < 0.0) throw ConfigError("grid: Im k must be >= 0");
  }

  /// Same grid with the real range mirrored so that k and -conj(k) are both nodes.
  [[nodiscard]] KGrid symmetrized() const {
    KGrid g = *this;
    const double r = std::max(std::abs(re_min), std::abs(re_max));
    g.re_min = -r;
    g.re_max = r;
    return g;
  }

  /// Index of -conj(k) for the node at idx (valid on symmetrized grids).
  [[nodiscard]] std::size_t mirror(std::size_t idx) const {
    const std::size_t j = idx / n_re;
    const std::size_t i = idx % n_re;
    return j * n_re + (n_re - 1 - i);
  }
};

struct GridOptions {
  Route route = Route::both;
  double route_tolerance = 1e-8;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// One S-matrix sample.  Failures become statuses; nothing throws for in-domain k.
inline SMatrixSample smatrix_at(const Potential& q, cplx k_value, const GridOptions& opt = {}) {
  SMatrixSample out;
  out.k = k_value;
  out.route = opt.route;
  if (k_value.real() == 0.0) {
    out.status = SampleStatus::excluded_axis;
    return out;
  }
  const Wavenumber k(k_value);
  try {
    const ScatteringCoefficients c = scattering_coefficients(q, k);
    out.delta = delta_k(c);
    if (delta_is_singular(c)) {
      out.status = SampleStatus::singular_delta;
      return out;
    }
    std::optional<Mat2C> s_coeffs, s_tk;
    if (opt.route != Route::tk) s_coeffs = smatrix_from_coeffs(c);
    if (opt.route != Route::coeffs)
      s_tk = smatrix_from_tk(tk_from_boundary_data(traveling_wave_boundary_values(c), k));
    out.S = s_coeffs ? *s_coeffs : *s_tk;
    if (s_coeffs && s_tk) {
      out.route_disagreement = operator_norm(*s_coeffs - *s_tk);
      if (!(out.route_disagreement <= opt.route_tolerance)) out.status = SampleStatus::route_mismatch;
    }
    if (!out.S.finite()) out.status = SampleStatus::overflow;
  } catch (const SingularMatching&) {
    out.delta = {std::numeric_limits<double>::infinity(), 0.0};
    out.status = SampleStatus::singular_delta;
  } catch (const SingularImageSet&) {
    out.status = SampleStatus::singular_delta;
  } catch (const SMatrixNonexistent&) {
    out.status = SampleStatus::singular_bracket;
  } catch (const Overflow&) {
    out.status = SampleStatus::overflow;
  }
  if (!out.ok() && out.status != SampleStatus::route_mismatch) {
    const cplx nan = SMatrixSample::nan_c();
    out.S = {nan, nan, nan, nan};
  }
  return out;
}

/// Evaluates fn(i) for i in [0, n) on a small worker pool; results keep index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<T> out(n);
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
    });
  pool.clear();
  return out;
}

inline std::vector<SMatrixSample> smatrix_grid(const Potential& q, const KGrid& grid,
                                               const GridOptions& opt = {}) {
  grid.validate();
  return parallel_map<SMatrixSample>(grid.size(), opt.threads,
                                     [&](std::size_t i) { return smatrix_at(q, grid.at(i), opt); });
}

}  // namespace ptscat
