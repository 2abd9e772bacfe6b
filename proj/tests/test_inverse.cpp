#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "ptscat/inverse.hpp"

using namespace ptscat;

namespace {
std::vector<MetricSample> sweep_pairs(const Potential& q, const KGrid& grid) {
  const KGrid g = grid.symmetrized();
  return pair_samples(smatrix_grid(q, g, {Route::both, 1e-8, 1}), g);
}

const KGrid grid{-2.0, 2.0, 10, 0.1, 2.0, 6};
}  // namespace

TEST_CASE("metric and C operator in closed form") {
  const Mat2C m = metric_from_chi(std::log(3.0));
  CHECK(oracle::dist(m, (5.0 / 3.0) * pauli::sigma0 + (4.0 / 3.0) * pauli::sigma2) < 1e-15);
  const COperator c0 = c_operator(0.0);
  CHECK(c0.C == pauli::sigma1);
  CHECK(c0.C * c0.C == Mat2C::identity());
  for (double chi : {-1.2, 0.3, 2.0}) {
    const COperator c = c_operator(chi);
    CHECK(oracle::dist(c.C * c.C, Mat2C::identity()) < 1e-13);
    CHECK(oracle::dist(c.C, std::cosh(chi) * pauli::sigma1 + oracle::I * std::sinh(chi) * pauli::sigma3) < 1e-14);
    CHECK(oracle::dist(c.eQ, metric_from_chi(chi)) == 0.0);
  }
}

TEST_CASE("projection onto the admissible Q") {
  CHECK(constrain_Q(pauli::sigma3) == Mat2C::zero());
  CHECK(oracle::dist(constrain_Q(pauli::sigma2), pauli::sigma2) == 0.0);
  CHECK(oracle::dist(constrain_Q(2.0 * pauli::sigma2 + 5.0 * pauli::sigma0 + pauli::sigma1), 2.0 * pauli::sigma2) <
        1e-15);
  // anti-Hermitian parts drop out
  CHECK(constrain_Q(oracle::I * pauli::sigma2) == Mat2C::zero());
}

TEST_CASE("point interaction gamma = 1 recovers chi = ln 3") {
  const auto est = recover_metric(sweep_pairs(Potential::point(1.0), grid));
  CHECK(std::abs(est.chi - std::log(3.0)) < 1e-12);
  CHECK(est.fit_residual <= 1e-12);
  REQUIRE(est.beta_implied);
  CHECK(std::abs(*est.beta_implied - beta_from_gamma(1.0)) < 1e-12);
}

TEST_CASE("recovered chi matches the exact minimizer") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> g(-1.9, 1.9);
  for (int n = 0; n < 25; ++n) {
    const double gamma = g(rng);
    const auto pairs = sweep_pairs(Potential::point(gamma), grid);
    const auto est = recover_metric(pairs);
    CHECK(std::abs(est.chi - oracle::metric_chi_exact(pairs)) < 1e-9);
    CHECK(std::abs(std::tanh(est.chi) - std::sin(beta_from_gamma(gamma))) < 1e-9);
  }
  const Potential pt_well = Potential::piecewise(1.0, {{-0.5, 0.0, cplx{0.0, -0.4}}, {0.0, 0.5, cplx{0.0, 0.4}}});
  const auto pairs = sweep_pairs(pt_well, grid);
  CHECK(std::abs(recover_metric(pairs).chi - oracle::metric_chi_exact(pairs)) < 1e-9);
}

TEST_CASE("self-adjoint cases give chi = 0") {
  CHECK(std::abs(recover_metric(sweep_pairs(Potential::point(0.0), grid)).chi) < 1e-12);
  CHECK(std::abs(recover_metric(sweep_pairs(Potential::piecewise(1.0, {{-0.5, 0.5, 2.0}}), grid)).chi) < 1e-6);
}

TEST_CASE("degenerate fits are reported") {
  CHECK_THROWS_AS(recover_metric(std::vector<MetricSample>{}), DegenerateFit);
  const std::vector<MetricSample> flat{{cplx{1.0, 0.0}, Mat2C::zero(), Mat2C::zero()}};
  CHECK_THROWS_AS(recover_metric(flat), DegenerateFit);
  // f(chi) = exp(2 chi): no interior minimum
  const Mat2C plus = 0.5 * Mat2C{1.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 1.0};
  const std::vector<MetricSample> runaway{{cplx{1.0, 0.0}, Mat2C::zero(), plus}};
  CHECK_THROWS_AS(recover_metric(runaway), DegenerateFit);
  const std::vector<MetricSample> nan{{cplx{1.0, 0.0}, Mat2C::identity(), {std::nan(""), 0.0, 0.0, 1.0}}};
  CHECK_THROWS_AS(recover_metric(nan), Error);
}

TEST_CASE("unconstrained diagnostic finds the sigma2 metric for the point interaction") {
  const auto pairs = sweep_pairs(Potential::point(1.0), grid);
  const auto d = diagnose_general_metric(pairs);
  CHECK(d.positive_definite);
  CHECK(d.null_dimension >= 1);
  CHECK(std::abs(d.q_pauli[2] - std::log(3.0)) < 1e-6);
  CHECK(d.discarded_fraction < 1e-6);
  CHECK_THROWS_AS(diagnose_general_metric(std::vector<MetricSample>{}), DegenerateFit);
}

TEST_CASE("pairing keeps only ok samples with ok partners") {
  const KGrid g{-1.0, 1.0, 3, 0.5, 0.5, 1};  // middle node sits on the imaginary axis
  const auto pairs = pair_samples(smatrix_grid(Potential::point(1.0), g), g);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].k == cplx{-1.0, 0.5});
  CHECK(pairs[1].k == cplx{1.0, 0.5});
}
