#pragma once
/**
 * @brief Compactly supported potentials q(x), supp q in [-rho, rho].
 *
 * Four shapes are supported: the free case, the zero-range point
 * interaction H_gamma, piecewise-constant wells and uniformly sampled
 * profiles.  Values are complex; no reality constraint is imposed.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptscat/mat2.hpp"

namespace ptscat {

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  cplx value{};
};

namespace shape {
struct Free {};
struct PointInteraction {
  double gamma = 0.0;
};
struct PiecewiseConstant {
  std::vector<Segment> segments;
};
/// Values on the uniform grid x_j = -rho + j * 2rho/(n-1); linear in between.
struct Sampled {
  std::vector<cplx> values;
};
}  // namespace shape

class Potential {
 public:
  using Shape =
      std::variant<shape::Free, shape::PointInteraction, shape::PiecewiseConstant, shape::Sampled>;

  static Potential free(double rho) {
    check_rho(rho);
    return Potential(rho, shape::Free{});
  }

  /// `window` widens the evaluation interval; the interaction itself sits at x = 0.
  static Potential point(double gamma, double window = 0.0) {
    check_rho(window);
    if (!std::isfinite(gamma)) throw InvalidPotential("point interaction: gamma must be finite");
    return Potential(window, shape::PointInteraction{gamma});
  }

  static Potential piecewise(double rho, std::vector<Segment> segments) {
    check_rho(rho);
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    double prev_hi = -rho;
    for (const auto& s : segments) {
      if (!(std::isfinite(s.lo) && std::isfinite(s.hi)) || !is_finite(s.value))
        throw InvalidPotential("piecewise: non-finite segment");
      if (!(s.lo < s.hi)) throw InvalidPotential("piecewise: segment with lo >= hi");
      if (s.lo < -rho || s.hi > rho) throw InvalidPotential("piecewise: segment outside [-rho, rho]");
      if (s.lo < prev_hi) throw InvalidPotential("piecewise: overlapping segments");
      prev_hi = s.hi;
    }
    return Potential(rho, shape::PiecewiseConstant{std::move(segments)});
  }

  static Potential sampled(double rho, std::vector<cplx> values) {
    check_rho(rho);
    if (values.size() < 2) throw InvalidPotential("sampled: need at least 2 samples");
    if (!(rho > 0.0)) throw InvalidPotential("sampled: rho must be positive");
    for (const auto& v : values)
      if (!is_finite(v)) throw InvalidPotential("sampled: non-finite sample");
    return Potential(rho, shape::Sampled{std::move(values)});
  }

  [[nodiscard]] double rho() const { return rho_; }
  [[nodiscard]] const Shape& shape() const { return shape_; }

  template <class S>
  [[nodiscard]] bool is() const {
    return std::holds_alternative<S>(shape_);
  }

  /// q(x) for the regular shapes; the point interaction evaluates to 0 off the origin.
  [[nodiscard]] cplx operator()(double x) const {
    if (x < -rho_ || x > rho_) return 0.0;
    return std::visit(
        [&](const auto& s) -> cplx {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, shape::PiecewiseConstant>) {
            for (const auto& seg : s.segments)
              if (x > seg.lo && x < seg.hi) return seg.value;
            return 0.0;
          } else if constexpr (std::is_same_v<T, shape::Sampled>) {
            const auto n = s.values.size();
            const double h = 2.0 * rho_ / static_cast<double>(n - 1);
            const double t = (x + rho_) / h;
            const auto j = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, t)), n - 2);
            const double w = t - static_cast<double>(j);
            return (1.0 - w) * s.values[j] + w * s.values[j + 1];
          } else {
            return 0.0;
          }
        },
        shape_);
  }

 private:
  Potential(double rho, Shape s) : rho_(rho), shape_(std::move(s)) {}

  static void check_rho(double rho) {
    if (!std::isfinite(rho) || rho < 0.0) throw InvalidPotential("support radius must be finite and >= 0");
  }

  double rho_ = 0.0;
  Shape shape_;
};

inline double support_radius(const Potential& q) { return q.rho(); }

/// sup_x |q(x) - conj(q(-x))| over n uniform points plus shape-aware points.
///
/// For piecewise-constant q both q(x) and q(-x) are constant between
/// consecutive points of the merged partition {breakpoints} U {-breakpoints},
/// so the midpoints of that partition give the exact supremum.
inline double pt_symmetry_residual(const Potential& q, int n) {
  if (n < 2) throw InvalidPotential("pt_symmetry_residual: need n >= 2");
  if (q.is<shape::Free>() || q.is<shape::PointInteraction>()) return 0.0;

  const double rho = q.rho();
  auto defect = [&](double x) { return std::abs(q(x) - std::conj(q(-x))); };
  double worst = 0.0;

  if (const auto* pw = std::get_if<shape::PiecewiseConstant>(&q.shape())) {
    std::vector<double> cuts{-rho, rho};
    for (const auto& s : pw->segments)
      for (double b : {s.lo, s.hi}) {
        cuts.push_back(b);
        cuts.push_back(-b);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      worst = std::max(worst, defect(0.5 * (cuts[i] + cuts[i + 1])));

    const double eps = 1e-9 * std::max(1.0, rho);
    for (int j = 0; j < n; ++j) {
      const double x = -rho + 2.0 * rho * j / (n - 1);
      const bool on_cut = std::any_of(cuts.begin(), cuts.end(),
                                      [&](double c) { return std::abs(c - x) < eps; });
      if (!on_cut) worst = std::max(worst, defect(x));
    }
    return worst;
  }

  const auto& s = std::get<shape::Sampled>(q.shape());
  const auto m = s.values.size();
  for (std::size_t j = 0; j < m; ++j)
    worst = std::max(worst, defect(-rho + 2.0 * rho * static_cast<double>(j) / static_cast<double>(m - 1)));
  for (int j = 0; j < n; ++j) worst = std::max(worst, defect(-rho + 2.0 * rho * j / (n - 1)));
  return worst;
}

}  // namespace ptscat
