#pragma once
/**
 * @brief JSON configuration parsing and CSV/JSON serialization.
 *
 * Numbers are always written with 17 significant digits; non-finite
 * values become `nan`/`inf` in CSV and `null` in JSON.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ptscat/inverse.hpp"
#include "ptscat/potential.hpp"
#include "ptscat/smatrix.hpp"
#include "ptscat/verify.hpp"

namespace ptscat {

using json = nlohmann::json;

enum class OutputFormat { csv, json };

struct MetricChoice {
  std::optional<double> chi;  ///< explicit e^Q = e^{chi sigma2}
  bool recover = false;       ///< fit chi from the sweep first
};

struct SweepConfig {
  Potential potential = Potential::free(0.0);
  KGrid grid;
  Route route = Route::both;
  Tolerances tolerances;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::set<Relation> relations;
  MetricChoice metric;
  unsigned threads = 0;
};

// ---------------------------------------------------------------- parsing

namespace detail {
inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + "." + key + ": missing field");
  return *it;
}

inline double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
  return v;
}

inline int as_count(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < 1 || v > 1'000'000) throw ConfigError(where + ": must be in [1, 1e6]");
  return static_cast<int>(v);
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_number(j.at(key), where + "." + key);
}
}  // namespace detail

/// A real number or a [re, im] pair.
inline cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {detail::as_number(j, where), 0.0};
  if (j.is_array() && j.size() == 2) return {detail::as_number(j[0], where + "[0]"), detail::as_number(j[1], where + "[1]")};
  throw ConfigError(where + ": expected a number or [re, im]");
}

inline Potential parse_potential(const json& j, const std::string& where = "potential") {
  using detail::as_number;
  const json& type_node = detail::require(j, "type", where);
  if (!type_node.is_string()) throw ConfigError(where + ".type: expected a string");
  const auto type = type_node.get<std::string>();
  try {
    if (type == "free") return Potential::free(as_number(detail::require(j, "rho", where), where + ".rho"));
    if (type == "point")
      return Potential::point(as_number(detail::require(j, "gamma", where), where + ".gamma"),
                              detail::number_or(j, "rho", 0.0, where));
    if (type == "piecewise") {
      const double rho = as_number(detail::require(j, "rho", where), where + ".rho");
      const json& segs = detail::require(j, "segments", where);
      if (!segs.is_array()) throw ConfigError(where + ".segments: expected an array");
      std::vector<Segment> out;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string w = where + ".segments[" + std::to_string(i) + "]";
        const json& s = segs[i];
        out.push_back({as_number(detail::require(s, "lo", w), w + ".lo"),
                       as_number(detail::require(s, "hi", w), w + ".hi"),
                       s.contains("value") ? parse_complex(s.at("value"), w + ".value")
                                           : cplx{detail::number_or(s, "re", 0.0, w), detail::number_or(s, "im", 0.0, w)}});
      }
      return Potential::piecewise(rho, std::move(out));
    }
    if (type == "sampled") {
      const double rho = as_number(detail::require(j, "rho", where), where + ".rho");
      const json& vals = detail::require(detail::require(j, "samples", where), "values", where + ".samples");
      if (!vals.is_array()) throw ConfigError(where + ".samples.values: expected an array");
      std::vector<cplx> out;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        out.push_back(parse_complex(vals[i], where + ".samples.values[" + std::to_string(i) + "]"));
      }
      return Potential::sampled(rho, std::move(out));
    }
  } catch (const InvalidPotential& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".type: unknown potential type '" + type + "'");
}

inline KGrid parse_grid(const json& j, const std::string& where = "grid") {
  KGrid g;
  for (const char* axis : {"re", "im"}) {
    const json& a = detail::require(j, axis, where);
    const std::string w = where + "." + axis;
    if (!a.is_array() || a.size() != 3) throw ConfigError(w + ": expected [min, max, count]");
    const double lo = detail::as_number(a[0], w + "[0]");
    const double hi = detail::as_number(a[1], w + "[1]");
    const int n = detail::as_count(a[2], w + "[2]");
    if (std::string(axis) == "re") {
      g.re_min = lo, g.re_max = hi, g.n_re = n;
    } else {
      g.im_min = lo, g.im_max = hi, g.n_im = n;
    }
  }
  g.validate();
  return g;
}

/// "re_min,re_max,n,im_min,im_max,m"
inline KGrid parse_grid_flag(const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(flag);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 6) throw ConfigError("--grid: expected re_min,re_max,n,im_min,im_max,m");
  try {
    KGrid g{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]),
            std::stod(parts[3]), std::stod(parts[4]), std::stoi(parts[5])};
    g.validate();
    return g;
  } catch (const std::logic_error&) {
    throw ConfigError("--grid: could not parse '" + flag + "'");
  }
}

inline Tolerances parse_tolerances(const json& j, Tolerances t = {}) {
  const std::string w = "tolerances";
  if (!j.is_object()) throw ConfigError(w + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const double v = detail::as_number(value, w + "." + key);
    if (v < 0) throw ConfigError(w + "." + key + ": must be >= 0");
    if (key == "route") t.route = v;
    else if (key == "pt") t.pt = v;
    else if (key == "hermitian") t.hermitian = v;
    else if (key == "contraction") t.contraction = v;
    else if (key == "unitarity") t.unitarity = v;
    else if (key == "intertwining") t.intertwining = v;
    else if (key == "min_eig") t.min_eig = v;
    else throw ConfigError(w + "." + key + ": unknown tolerance");
  }
  return t;
}

inline std::set<Relation> parse_relations(const std::vector<std::string>& names) {
  std::set<Relation> out;
  for (const auto& n : names) {
    const auto r = parse_relation(n);
    if (!r) throw ConfigError("relations: unknown relation '" + n + "'");
    out.insert(*r);
  }
  return out;
}

inline SweepConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  SweepConfig c;
  c.potential = parse_potential(detail::require(j, "potential", "config"));
  c.grid = parse_grid(detail::require(j, "grid", "config"));
  if (j.contains("route")) {
    const json& r = j.at("route");
    const auto route = r.is_string() ? parse_route(r.get<std::string>()) : std::nullopt;
    if (!route) throw ConfigError("route: expected one of coeffs, tk, both");
    c.route = *route;
  }
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j.at("tolerances"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output: expected an object");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw ConfigError("output.path: expected a string");
      c.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      const json& f = o.at("format");
      if (f == "csv") c.format = OutputFormat::csv;
      else if (f == "json") c.format = OutputFormat::json;
      else throw ConfigError("output.format: expected csv or json");
    }
  }
  if (j.contains("relations")) {
    const json& r = j.at("relations");
    if (!r.is_array()) throw ConfigError("relations: expected an array of names");
    std::vector<std::string> names;
    for (const auto& x : r) {
      if (!x.is_string()) throw ConfigError("relations: expected strings");
      names.push_back(x.get<std::string>());
    }
    c.relations = parse_relations(names);
  }
  if (j.contains("metric")) {
    const json& m = j.at("metric");
    if (!m.is_object()) throw ConfigError("metric: expected an object");
    if (m.contains("chi")) c.metric.chi = detail::as_number(m.at("chi"), "metric.chi");
    if (m.contains("recover")) {
      if (!m.at("recover").is_boolean()) throw ConfigError("metric.recover: expected a boolean");
      c.metric.recover = m.at("recover").get<bool>();
    }
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_unsigned()) throw ConfigError("threads: expected a non-negative integer");
    c.threads = j.at("threads").get<unsigned>();
  }
  return c;
}

/// Parses JSON text; syntax errors are reported with line and column.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                      e.what() + ")");
  }
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(parse_json_text(text, path));
}

// ---------------------------------------------------------------- output

/// 17 significant digits, round-trip exact for doubles.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  if (v == 0.0) v = 0.0;  // print -0 as 0
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {
inline void dump17(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_number(v) : "null");
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& x : j) {
        if (flat) {
          os << (first ? "" : ", ");
        } else {
          os << (first ? "" : ",") << '\n' << pad;
        }
        first = false;
        dump17(os, x, indent, depth + 1);
      }
      if (!flat) os << '\n' << close_pad;
      os << ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        os << (first ? "" : ",") << '\n' << pad << json(key).dump() << ": ";
        first = false;
        dump17(os, value, indent, depth + 1);
      }
      os << '\n' << close_pad << '}';
      return;
    }
    default:
      os << j.dump();
  }
}
}  // namespace detail

/// Serializes like json::dump(2) but prints floats with 17 significant digits.
inline std::string dump_json(const json& j) {
  std::ostringstream os;
  detail::dump17(os, j, 2, 0);
  os << '\n';
  return os.str();
}

inline json mat2_to_json(const Mat2C& m) {
  auto entry = [](cplx z) { return json::array({z.real(), z.imag()}); };
  return json::array({json::array({entry(m.a11), entry(m.a12)}), json::array({entry(m.a21), entry(m.a22)})});
}

inline const std::vector<std::string>& sample_columns() {
  static const std::vector<std::string> cols{"re_k",   "im_k",   "status", "re_S11",   "im_S11",
                                             "re_S12", "im_S12", "re_S21", "im_S21",   "re_S22",
                                             "im_S22", "abs_delta", "route_disagreement"};
  return cols;
}

inline void write_samples_csv(std::ostream& os, const std::vector<SMatrixSample>& samples) {
  const auto& cols = sample_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& s : samples) {
    os << format_number(s.k.real()) << ',' << format_number(s.k.imag()) << ',' << to_string(s.status);
    for (cplx z : {s.S.a11, s.S.a12, s.S.a21, s.S.a22})
      os << ',' << format_number(z.real()) << ',' << format_number(z.imag());
    os << ',' << format_number(std::abs(s.delta)) << ',' << format_number(s.route_disagreement) << '\n';
  }
}

inline json samples_to_json(const std::vector<SMatrixSample>& samples, Route route) {
  json rows = json::array();
  for (const auto& s : samples) {
    json r = json::object();
    r["re_k"] = s.k.real();
    r["im_k"] = s.k.imag();
    r["status"] = std::string(to_string(s.status));
    const std::array<cplx, 4> entries{s.S.a11, s.S.a12, s.S.a21, s.S.a22};
    const std::array<const char*, 4> names{"S11", "S12", "S21", "S22"};
    for (std::size_t i = 0; i < 4; ++i) {
      r[std::string("re_") + names[i]] = entries[i].real();
      r[std::string("im_") + names[i]] = entries[i].imag();
    }
    r["abs_delta"] = std::abs(s.delta);
    r["route_disagreement"] = s.route_disagreement;
    rows.push_back(std::move(r));
  }
  return json{{"route", std::string(to_string(route))}, {"columns", sample_columns()}, {"samples", rows}};
}

inline json report_to_json(const VerificationReport& rep) {
  json pairs = json::array();
  for (const auto& p : rep.pairs) {
    const auto& r = p.residuals;
    pairs.push_back({{"re_k", p.k.real()},
                     {"im_k", p.k.imag()},
                     {"pt_relation", r.pt_relation},
                     {"hermitian_analyticity", r.hermitian_analyticity},
                     {"contraction_excess", r.contraction_excess},
                     {"metric_intertwining", r.metric_intertwining},
                     {"metric_contraction_min_eig", r.metric_contraction_min_eig}});
  }
  json summary = json::array();
  for (const auto& s : rep.summaries)
    summary.push_back({{"relation", s.name},
                       {"worst", s.worst},
                       {"median", s.median},
                       {"tolerance", s.tolerance},
                       {"count", s.count},
                       {"passed", s.passed}});
  return json{{"passed", rep.all_passed()},
              {"ok_points", rep.ok_points},
              {"unpaired_points", rep.skipped_points},
              {"summary", summary},
              {"pairs", pairs}};
}

inline json estimate_to_json(const MetricEstimate& est, const std::optional<GeneralMetricDiagnostic>& diag = {}) {
  const COperator c = c_operator(est.chi);
  json j{{"chi", est.chi},
         {"tanh_chi", std::tanh(est.chi)},
         {"beta_implied", est.beta_implied ? json(*est.beta_implied) : json(nullptr)},
         {"fit_residual", est.fit_residual},
         {"eQ", mat2_to_json(est.eQ)},
         {"C", mat2_to_json(c.C)},
         {"C_description", c.description}};
  if (diag) {
    j["general_metric"] = {{"normal_eigenvalues", diag->eigenvalues},
                           {"null_dimension", diag->null_dimension},
                           {"metric_pauli", diag->metric_pauli},
                           {"positive_definite", diag->positive_definite},
                           {"q_pauli", diag->q_pauli},
                           {"discarded_fraction", diag->discarded_fraction},
                           {"residual", diag->general_residual}};
  }
  return j;
}

}  // namespace ptscat
