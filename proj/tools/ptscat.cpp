// ptscat: S-matrix sweeps, symmetry checks and metric recovery from a JSON config.
//
//   ptscat smatrix  --config sweep.json [--grid a,b,n,c,d,m] [--route both] [--out s.csv]
//   ptscat verify   --config sweep.json --relations pt,hermitian [--tol pt=1e-9]
//   ptscat recover  --config sweep.json [--diagnose]
//   ptscat selftest
//
// Exit codes: 0 ok, 1 unexpected error, 2 bad config, 3 a relation exceeded its
// tolerance, 4 metric fit degenerate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptscat/acceptance.hpp"
#include "ptscat/ptscat.hpp"

namespace {

using namespace ptscat;

enum Exit : int { exit_ok = 0, exit_other = 1, exit_config = 2, exit_tolerance = 3, exit_degenerate = 4 };

struct Overrides {
  std::string config_path;
  std::string grid;
  std::string route;
  std::string out;
  std::string format;
  std::vector<std::string> tol;
  std::vector<std::string> relations;
  std::optional<double> chi;
  bool recover = false;
  bool diagnose = false;
  std::optional<unsigned> threads;
};

SweepConfig resolve(const Overrides& o) {
  SweepConfig c = load_config(o.config_path);
  if (!o.grid.empty()) c.grid = parse_grid_flag(o.grid);
  if (!o.route.empty()) {
    const auto r = parse_route(o.route);
    if (!r) throw ConfigError("--route: expected one of coeffs, tk, both");
    c.route = *r;
  }
  if (!o.out.empty()) c.output_path = o.out;
  if (!o.format.empty()) {
    if (o.format == "csv") c.format = OutputFormat::csv;
    else if (o.format == "json") c.format = OutputFormat::json;
    else throw ConfigError("--format: expected csv or json");
  }
  if (!o.tol.empty()) {
    json t = json::object();
    for (const auto& kv : o.tol) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol: expected name=value, got '" + kv + "'");
      try {
        t[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw ConfigError("--tol: bad number in '" + kv + "'");
      }
    }
    c.tolerances = parse_tolerances(t, c.tolerances);
  }
  if (!o.relations.empty()) c.relations = parse_relations(o.relations);
  if (o.chi) c.metric.chi = o.chi;
  if (o.recover) c.metric.recover = true;
  if (o.threads) c.threads = *o.threads;
  return c;
}

GridOptions grid_options(const SweepConfig& c) { return {c.route, c.tolerances.route, c.threads}; }

// Output is assembled in memory and written only once everything succeeded.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
}

MetricEstimate fit(const SweepConfig& c) {
  const KGrid g = c.grid.symmetrized();
  GridOptions opt = grid_options(c);
  const auto samples = smatrix_grid(c.potential, g, opt);
  const auto pairs = pair_samples(samples, g);
  return recover_metric(pairs);
}

int run_smatrix(const Overrides& o) {
  const SweepConfig c = resolve(o);
  const auto samples = smatrix_grid(c.potential, c.grid, grid_options(c));
  std::ostringstream os;
  if (c.format == OutputFormat::json) os << dump_json(samples_to_json(samples, c.route));
  else write_samples_csv(os, samples);
  emit(c.output_path, os.str());

  std::size_t ok = 0;
  for (const auto& s : samples) ok += s.ok();
  std::cerr << "smatrix: " << ok << " of " << samples.size() << " samples ok\n";
  return exit_ok;
}

int run_verify(const Overrides& o) {
  const SweepConfig c = resolve(o);
  if (c.relations.empty()) throw ConfigError("verify: no relations selected (config 'relations' or --relations)");
  std::optional<Mat2C> metric;
  if (c.metric.chi) metric = metric_from_chi(*c.metric.chi);
  else if (c.metric.recover) metric = fit(c).eQ;

  const auto rep = verify_grid(c.potential, c.grid, c.relations, c.tolerances, metric, grid_options(c));
  emit(c.output_path, dump_json(report_to_json(rep)));
  for (const auto& s : rep.summaries)
    std::cerr << (s.passed ? "PASS " : "FAIL ") << s.name << " worst=" << format_number(s.worst)
              << " tol=" << format_number(s.tolerance) << " n=" << s.count << '\n';
  return rep.all_passed() ? exit_ok : exit_tolerance;
}

int run_recover(const Overrides& o) {
  const SweepConfig c = resolve(o);
  const KGrid g = c.grid.symmetrized();
  const auto pairs = pair_samples(smatrix_grid(c.potential, g, grid_options(c)), g);
  const MetricEstimate est = recover_metric(pairs);
  std::optional<GeneralMetricDiagnostic> diag;
  if (o.diagnose) diag = diagnose_general_metric(pairs);
  emit(c.output_path, dump_json(estimate_to_json(est, diag)));
  std::cerr << "recover: chi=" << format_number(est.chi) << " fit_residual=" << format_number(est.fit_residual)
            << " from " << pairs.size() << " pairs\n";
  return exit_ok;
}

int run_selftest() {
  bool all = true;
  double total = 0.0;
  for (const auto& r : acceptance::run_all()) {
    std::printf("%s [%d] %s: %s (%.3f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
                r.seconds);
    all = all && r.passed;
    total += r.seconds;
  }
  std::printf("%s, %.3f s total\n", all ? "all criteria passed" : "some criteria FAILED", total);
  return all ? exit_ok : exit_tolerance;
}

void add_config_options(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_path, "JSON sweep configuration")->required();
  sub->add_option("--grid", o.grid, "override grid: re_min,re_max,n,im_min,im_max,m");
  sub->add_option("--route", o.route, "coeffs | tk | both");
  sub->add_option("-o,--out", o.out, "output file ('-' for stdout)");
  sub->add_option("--format", o.format, "csv | json");
  sub->add_option("--tol", o.tol, "tolerance override name=value (repeatable)");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytically continued S-matrix of 1-D Schroedinger operators"};
  app.require_subcommand(1);
  Overrides o;

  auto* smatrix = app.add_subcommand("smatrix", "evaluate S(k) over a grid");
  add_config_options(smatrix, o);

  auto* verify = app.add_subcommand("verify", "check symmetry relations over a grid");
  add_config_options(verify, o);
  verify->add_option("--relations", o.relations, "pt, hermitian, contraction, unitarity, metric")->delimiter(',');
  verify->add_option("--chi", o.chi, "use e^Q = exp(chi sigma2) for the metric relations");
  verify->add_flag("--recover-metric", o.recover, "fit chi from the same grid first");

  auto* recover = app.add_subcommand("recover", "fit the metric e^Q = exp(chi sigma2)");
  add_config_options(recover, o);
  recover->add_flag("--diagnose", o.diagnose, "also fit an unconstrained Hermitian metric");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*smatrix) return run_smatrix(o);
    if (*verify) return run_verify(o);
    if (*recover) return run_recover(o);
    if (*selftest) return run_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DegenerateFit& e) {
    std::cerr << "degenerate fit: " << e.what() << '\n';
    return exit_degenerate;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_other;
  }
  return exit_other;
}
