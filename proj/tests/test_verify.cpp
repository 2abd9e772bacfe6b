#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ptscat/verify.hpp"

using namespace ptscat;

namespace {
const Mat2C point_s_one{cplx{0.0, -4.0 / 3.0}, -5.0 / 3.0, -5.0 / 3.0, cplx{0.0, 4.0 / 3.0}};
const Mat2C metric_one = (5.0 / 3.0) * pauli::sigma0 + (4.0 / 3.0) * pauli::sigma2;
const Potential well = Potential::piecewise(1.0, {{-0.5, 0.5, 2.0}});
const Potential pt_well = Potential::piecewise(1.0, {{-0.5, 0.0, cplx{0.0, -1.5}}, {0.0, 0.5, cplx{0.0, 1.5}}});
const KGrid grid{-2.0, 2.0, 12, 0.0, 2.0, 7};

const RelationSummary& find(const VerificationReport& r, const std::string& name) {
  for (const auto& s : r.summaries)
    if (s.name == name) return s;
  throw std::runtime_error("no summary " + name);
}
}  // namespace

TEST_CASE("relation residuals of hand examples") {
  CHECK(check_pt_relation(Mat2C::identity(), pauli::sigma3) == Catch::Approx(2.0));
  CHECK(check_pt_relation(point_s_one, point_s_one) < 1e-15);
  CHECK(check_hermitian_analyticity(point_s_one, point_s_one) == Catch::Approx(8.0 / 3.0));
  CHECK(check_contraction(point_s_one) == Catch::Approx(2.0));
  CHECK(check_contraction(0.5 * pauli::sigma1) == 0.0);
  CHECK(check_unitarity(pauli::sigma2) < 1e-15);
  CHECK(check_unitarity(2.0 * pauli::sigma0) == Catch::Approx(3.0));
}

TEST_CASE("metric relations") {
  const auto m = check_metric_relations(point_s_one, point_s_one, metric_one);
  CHECK(m.intertwining < 1e-14);
  CHECK(std::abs(m.min_eig) < 1e-14);
  const auto bad = check_metric_relations(2.0 * Mat2C::identity(), 2.0 * Mat2C::identity(), Mat2C::identity());
  CHECK(bad.min_eig == Catch::Approx(-3.0));
  CHECK_THROWS_AS(check_metric_relations(point_s_one, point_s_one, pauli::sigma1), NotPositiveDefinite);
  CHECK_THROWS_AS(require_positive_definite({1.0, 1.0, 0.0, 1.0}), NotPositiveDefinite);
  CHECK_NOTHROW(require_positive_definite(metric_one));
}

TEST_CASE("real well passes the self-adjoint relations") {
  const auto rep = verify_grid(well, grid, {Relation::hermitian, Relation::contraction, Relation::unitarity}, {});
  CHECK(rep.all_passed());
  CHECK(find(rep, "hermitian").count > 0);
  CHECK(find(rep, "unitarity").count == 12);
  CHECK(find(rep, "contraction").worst <= 1e-10);
  CHECK(rep.skipped_points == 0);
}

TEST_CASE("PT well passes the PT relation but not hermitian analyticity") {
  const auto rep = verify_grid(pt_well, grid, {Relation::pt, Relation::hermitian}, {});
  CHECK(find(rep, "pt").passed);
  CHECK(find(rep, "pt").worst <= 1e-8);
  CHECK_FALSE(find(rep, "hermitian").passed);
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("point interaction satisfies the metric relations with its own metric") {
  const auto rep = verify_grid(Potential::point(1.0), grid, {Relation::pt, Relation::metric}, {}, metric_one);
  CHECK(rep.all_passed());
  CHECK(find(rep, "metric_min_eig").worst >= -1e-10);
  const auto wrong = verify_grid(Potential::point(1.0), grid, {Relation::metric}, {}, Mat2C::identity());
  CHECK_FALSE(wrong.all_passed());
}

TEST_CASE("verification inputs are validated") {
  CHECK_THROWS_AS(verify_grid(well, grid, {Relation::metric}, {}), ConfigError);
  CHECK_THROWS_AS(verify_grid(well, grid, {Relation::pt}, {}, pauli::sigma3), NotPositiveDefinite);
  // only imaginary-axis points: no evidence, so the relation fails
  const auto empty = verify_grid(well, KGrid{0.0, 0.0, 1, 0.5, 1.0, 2}, {Relation::pt}, {});
  CHECK(find(empty, "pt").count == 0);
  CHECK_FALSE(empty.all_passed());
}

TEST_CASE("relation names") {
  CHECK(parse_relation("metric") == Relation::metric);
  CHECK(parse_relation("unitarity") == Relation::unitarity);
  CHECK_FALSE(parse_relation("PT"));
  CHECK(to_string(Relation::contraction) == "contraction");
}
