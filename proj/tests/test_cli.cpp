// Runs the ptscat binary end to end.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
const std::string cli = PTSCAT_CLI_PATH;
const std::string configs = PTSCAT_CONFIG_DIR;

int run(const std::string& args) {
  const int status = std::system((cli + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = "cli_" + name + ".json";
  std::ofstream(path) << body;
  return path;
}

std::string point_config(double gamma) {
  return write_config("point" + std::to_string(static_cast<int>(gamma * 10)),
                      R"({"potential": {"type": "point", "gamma": )" + std::to_string(gamma) +
                          R"(}, "grid": {"re": [-2, 2, 8], "im": [0.1, 2, 5]}})");
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(line);
  return rows;
}
}  // namespace

TEST_CASE("free sweep on a 3x3 grid") {
  fs::remove("cli_free.csv");
  REQUIRE(run("smatrix -c " + configs + "/free.json --grid 0.5,1.5,3,0.5,1.5,3 --out cli_free.csv") == 0);
  const auto rows = data_rows(slurp("cli_free.csv"));
  REQUIRE(rows.size() == 9);
  for (const auto& r : rows) CHECK(r.find(",ok,") != std::string::npos);
}

TEST_CASE("sweeps are byte-identical across runs and thread counts") {
  REQUIRE(run("smatrix -c " + configs + "/pt_well.json --out cli_a.csv --threads 1") == 0);
  REQUIRE(run("smatrix -c " + configs + "/pt_well.json --out cli_b.csv --threads 4") == 0);
  const std::string a = slurp("cli_a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp("cli_b.csv"));
  REQUIRE(run("smatrix -c " + configs + "/sampled_ramp.json --out cli_a.json") == 0);
  REQUIRE(run("smatrix -c " + configs + "/sampled_ramp.json --out cli_b.json") == 0);
  CHECK(slurp("cli_a.json") == slurp("cli_b.json"));
  CHECK(json::parse(slurp("cli_a.json"))["samples"].size() == 35);
}

TEST_CASE("gamma = 2 gives only singular rows and still succeeds") {
  REQUIRE(run("smatrix -c " + configs + "/point_gamma2.json --out cli_g2.csv") == 0);
  const auto rows = data_rows(slurp("cli_g2.csv"));
  REQUIRE(rows.size() == 400);
  for (const auto& r : rows) CHECK(r.find(",singular_") != std::string::npos);
}

TEST_CASE("malformed config fails without writing output") {
  const std::string bad = write_config("bad", R"({"potential": {"type": "free", "rho": 1}, "grid": )");
  fs::remove("cli_none.csv");
  CHECK(run("smatrix -c " + bad + " --out cli_none.csv") == 2);
  CHECK_FALSE(fs::exists("cli_none.csv"));
  CHECK(run("smatrix -c " + configs + "/free.json --route fast --out cli_none.csv") == 2);
  CHECK(run("smatrix -c " + configs + "/free.json --grid 1,2 --out cli_none.csv") == 2);
  CHECK(run("smatrix -c missing.json --out cli_none.csv") == 2);
  CHECK(run("smatrix --out cli_none.csv") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK_FALSE(fs::exists("cli_none.csv"));
}

TEST_CASE("verify subcommand") {
  CHECK(run("verify -c " + configs + "/square_well.json --out cli_v1.json") == 0);
  const json rep = json::parse(slurp("cli_v1.json"));
  CHECK(rep["passed"] == true);
  CHECK(rep["summary"].size() == 3);

  CHECK(run("verify -c " + configs + "/pt_well.json --out cli_v2.json") == 0);
  CHECK(run("verify -c " + configs + "/pt_well_unit.json --out cli_v2.json") == 0);
  CHECK(run("verify -c " + configs + "/pt_well.json --relations pt,hermitian --out cli_v3.json") == 3);
  CHECK(json::parse(slurp("cli_v3.json"))["passed"] == false);
  CHECK(run("verify -c " + configs + "/point_gamma1.json --out cli_v4.json") == 0);
  CHECK(run("verify -c " + configs + "/point_gamma1.json --relations metric --chi 0 --out cli_v5.json") == 3);
  CHECK(run("verify -c " + configs + "/free.json --out cli_v6.json") == 2);  // no relations selected
  CHECK(run("verify -c " + configs + "/pt_well.json --tol pt=oops --out cli_v6.json") == 2);
  CHECK(run("verify -c " + configs + "/pt_well.json --tol pt=1e-20 --out cli_v6.json") == 3);
}

TEST_CASE("recover subcommand") {
  REQUIRE(run("recover -c " + point_config(1.0) + " --out cli_r1.json") == 0);
  const json r1 = json::parse(slurp("cli_r1.json"));
  CHECK(std::abs(r1["chi"].get<double>() - std::log(3.0)) < 1e-10);
  CHECK(r1["fit_residual"].get<double>() <= 1e-12);

  REQUIRE(run("recover -c " + point_config(0.0) + " --out cli_r0.json") == 0);
  CHECK(std::abs(json::parse(slurp("cli_r0.json"))["chi"].get<double>()) < 1e-12);

  REQUIRE(run("recover -c " + configs + "/square_well.json --diagnose --out cli_rw.json") == 0);
  const json rw = json::parse(slurp("cli_rw.json"));
  CHECK(std::abs(rw["chi"].get<double>()) < 1e-6);
  CHECK(rw.contains("general_metric"));

  CHECK(run("recover -c " + configs + "/point_gamma2.json --out cli_r2.json") == 4);
}

TEST_CASE("selftest passes") { CHECK(run("selftest") == 0); }
