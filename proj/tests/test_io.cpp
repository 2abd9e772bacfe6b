#include <catch_amalgamated.hpp>

#include <sstream>

#include "ptscat/io.hpp"

using namespace ptscat;
using Catch::Matchers::ContainsSubstring;

namespace {
json parse(const std::string& s) { return parse_json_text(s, "test.json"); }

std::string config_error(const std::string& text) {
  try {
    parse_config(parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* minimal = R"({"potential": {"type": "free", "rho": 1}, "grid": {"re": [-1, 1, 3], "im": [0, 1, 2]}})";
}  // namespace

TEST_CASE("full config parses") {
  const auto c = parse_config(parse(R"({
    "potential": {"type": "piecewise", "rho": 1.0,
                  "segments": [{"lo": 0.0, "hi": 0.5, "value": [0, 1.5]}, {"lo": -0.5, "hi": 0.0, "value": [0, -1.5]}]},
    "grid": {"re": [-2, 2, 20], "im": [0.1, 2, 20]},
    "route": "tk",
    "tolerances": {"pt": 1e-9, "min_eig": 1e-12},
    "output": {"path": "out.json", "format": "json"},
    "relations": ["pt", "metric"],
    "metric": {"chi": 0.5},
    "threads": 2
  })"));
  CHECK(c.potential.is<shape::PiecewiseConstant>());
  CHECK(c.potential(0.25) == cplx{0.0, 1.5});
  CHECK(c.grid.n_re == 20);
  CHECK(c.grid.im_min == 0.1);
  CHECK(c.route == Route::tk);
  CHECK(c.tolerances.pt == 1e-9);
  CHECK(c.tolerances.min_eig == 1e-12);
  CHECK(c.tolerances.hermitian == 1e-8);
  CHECK(c.output_path == "out.json");
  CHECK(c.format == OutputFormat::json);
  CHECK(c.relations == std::set<Relation>{Relation::pt, Relation::metric});
  CHECK(c.metric.chi == 0.5);
  CHECK(c.threads == 2);
}

TEST_CASE("defaults and every potential type") {
  const auto c = parse_config(parse(minimal));
  CHECK(c.route == Route::both);
  CHECK(c.format == OutputFormat::csv);
  CHECK(c.output_path.empty());
  CHECK(c.potential.is<shape::Free>());

  CHECK(parse_potential(parse(R"({"type": "point", "gamma": 1.5})")).is<shape::PointInteraction>());
  CHECK(parse_potential(parse(R"({"type": "point", "gamma": 1.5, "rho": 0.5})")).rho() == 0.5);
  const Potential s = parse_potential(parse(R"({"type": "sampled", "rho": 1, "samples": {"values": [1, [2, 3], 4]}})"));
  CHECK(s(0.0) == cplx{2.0, 3.0});
  const Potential pw = parse_potential(parse(R"({"type": "piecewise", "rho": 1, "segments": [{"lo": 0, "hi": 1, "re": 2, "im": -1}]})"));
  CHECK(pw(0.5) == cplx{2.0, -1.0});
  const Potential im_only = parse_potential(parse(R"({"type": "piecewise", "rho": 1, "segments": [{"lo": 0, "hi": 1, "im": 1}]})"));
  CHECK(im_only(0.5) == cplx{0.0, 1.0});
}

TEST_CASE("config errors name the offending field") {
  CHECK_THAT(config_error(R"({"grid": {"re": [-1, 1, 3], "im": [0, 1, 2]}})"), ContainsSubstring("config.potential"));
  CHECK_THAT(config_error(R"({"potential": {"type": "wobbly"}, "grid": {}})"), ContainsSubstring("wobbly"));
  CHECK_THAT(config_error(R"({"potential": {"type": "free", "rho": -1}, "grid": {"re": [-1, 1, 3], "im": [0, 1, 2]}})"),
             ContainsSubstring("potential"));
  CHECK_THAT(config_error(R"({"potential": {"type": "free", "rho": 1}, "grid": {"re": [-1, 1, 0], "im": [0, 1, 2]}})"),
             ContainsSubstring("grid.re[2]"));
  CHECK_THAT(config_error(R"({"potential": {"type": "free", "rho": 1}, "grid": {"re": [-1, 1, 3], "im": [-1, 1, 2]}})"),
             ContainsSubstring("Im k"));
  CHECK_THAT(config_error(R"({"potential": {"type": "piecewise", "rho": 1, "segments": [{"lo": 0, "hi": 1, "value": "x"}]},
                              "grid": {"re": [-1, 1, 3], "im": [0, 1, 2]}})"),
             ContainsSubstring("potential.segments[0].value"));
  const std::string base = R"("potential": {"type": "free", "rho": 1}, "grid": {"re": [-1, 1, 3], "im": [0, 1, 2]})";
  CHECK_THAT(config_error("{" + base + R"(, "route": "fast"})"), ContainsSubstring("route"));
  CHECK_THAT(config_error("{" + base + R"(, "tolerances": {"pt": -1}})"), ContainsSubstring("tolerances.pt"));
  CHECK_THAT(config_error("{" + base + R"(, "tolerances": {"speed": 1}})"), ContainsSubstring("unknown tolerance"));
  CHECK_THAT(config_error("{" + base + R"(, "relations": ["pt", "magic"]})"), ContainsSubstring("magic"));
  CHECK_THAT(config_error("{" + base + R"(, "output": {"format": "xml"}})"), ContainsSubstring("output.format"));
  CHECK_THAT(config_error("{" + base + R"(, "threads": -2})"), ContainsSubstring("threads"));
  CHECK_THAT(config_error("[1, 2]"), ContainsSubstring("top level"));
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse("{\n  \"a\": 1,\n  oops\n}");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK_THAT(std::string(e.what()), ContainsSubstring("test.json:3:"));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("grid flag") {
  const KGrid g = parse_grid_flag("-1,1,3,0.5,1,2");
  CHECK(g.re_min == -1.0);
  CHECK(g.n_re == 3);
  CHECK(g.im_max == 1.0);
  CHECK(g.n_im == 2);
  CHECK_THROWS_AS(parse_grid_flag("1,2,3"), ConfigError);
  CHECK_THROWS_AS(parse_grid_flag("a,1,3,0,1,2"), ConfigError);
  CHECK_THROWS_AS(parse_grid_flag("-1,1,3,-1,1,2"), ConfigError);
}

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-HUGE_VAL) == "-inf");
  CHECK(format_number(1e300) == "1.0000000000000001e+300");
  CHECK(dump_json(json{{"x", 0.1}, {"y", json::array({1.5, -0.0})}}) ==
        "{\n  \"x\": 0.10000000000000001,\n  \"y\": [1.5, 0]\n}\n");
  CHECK(dump_json(json{{"v", std::nan("")}}).find("null") != std::string::npos);
}

TEST_CASE("sample tables") {
  const KGrid g{-1.0, 1.0, 3, 0.5, 0.5, 1};
  const auto samples = smatrix_grid(Potential::point(1.0), g, {Route::both, 1e-8, 1});
  std::ostringstream os;
  write_samples_csv(os, samples);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "re_k,im_k,status,re_S11,im_S11,re_S12,im_S12,re_S21,im_S21,re_S22,im_S22,abs_delta,route_disagreement");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 12);
  }
  CHECK(rows == 3);
  CHECK_THAT(os.str(), ContainsSubstring("excluded_axis"));

  const json j = samples_to_json(samples, Route::both);
  CHECK(j["samples"].size() == 3);
  CHECK(j["samples"][1]["status"] == "excluded_axis");
  CHECK(j["samples"][0]["re_S12"].get<double>() == Catch::Approx(-5.0 / 3.0));
  CHECK(dump_json(j) == dump_json(samples_to_json(samples, Route::both)));
}

TEST_CASE("estimate serialisation") {
  MetricEstimate est;
  est.chi = std::log(3.0);
  est.eQ = metric_from_chi(est.chi);
  est.beta_implied = std::asin(std::tanh(est.chi));
  const json j = estimate_to_json(est);
  CHECK(j["chi"].get<double>() == est.chi);
  CHECK(j["tanh_chi"].get<double>() == Catch::Approx(0.8));
  CHECK(j["eQ"][0][0][0].get<double>() == Catch::Approx(5.0 / 3.0));
  CHECK(j["eQ"][0][1][1].get<double>() == Catch::Approx(-4.0 / 3.0));
  CHECK_FALSE(j.contains("general_metric"));
}
