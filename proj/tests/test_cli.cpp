#include "qcqp_stability/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcqp-stability");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qcqps::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "qcqps_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("repro writes the Lipschitz report") {
  const auto path = scratch("r.json");
  auto r = run({"repro", "lipschitz", "--n", "8", "--out", path.string()});
  REQUIRE(r.code == 0);
  auto j = read_json(path);
  CHECK(j["solve"]["status"] == "solved");
  CHECK(std::abs(j["solve"]["value"].get<double>() + 1.0) <= 1e-6);
  CHECK(j["conditions"]["cond_i"] == true);
  CHECK(j["conditions"]["cond_ii"] == true);
  CHECK(j["conditions"]["cond_iii"] == true);
}

TEST_CASE("validate names the offending constraint") {
  const auto path = scratch("bad.json");
  write(path, R"({"dim": 2, "objective": {"T": [[1, 0], [0, 1]], "c": [0, 0]},
    "constraints": [{"T": [[1, 0], [0, 1]], "c": [0, 0], "alpha": -1},
                    {"T": [[-1, 0], [0, 1]], "c": [0, 0], "alpha": -1}]})");
  auto r = run({"validate", path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("constraint 1") != std::string::npos);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["valid"] == false);
  CHECK(j["diagnostics"][0]["component"] == 1);

  // other commands refuse invalid input too
  CHECK(run({"solve", path.string()}).code == 1);
}

TEST_CASE("qpr on the perturbed K instance") {
  const auto path = scratch("k3.json");
  REQUIRE(run({"repro", "k_not_open", "--n", "3", "--perturbed", "--problem-only", "--out", path.string()}).code == 0);
  auto r = run({"qpr", "--input", path.string()});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["trivial"] == false);
  CHECK(std::abs(j["witness"][2].get<double>()) >= 0.999);
}

TEST_CASE("report schemas") {
  const auto path = scratch("lip2.json");
  REQUIRE(run({"repro", "lipschitz", "--n", "2", "--problem-only", "--out", path.string()}).code == 0);

  auto solve = nlohmann::json::parse(run({"solve", path.string()}).out);
  CHECK(solve.contains("status"));
  CHECK(solve.contains("value"));
  CHECK(solve["minimizers"].is_array());

  auto cond = nlohmann::json::parse(run({"conditions", path.string()}).out);
  for (const char* k : {"cond_i", "cond_ii", "cond_iii"}) CHECK(cond[k].is_boolean());
  CHECK(cond["predictions"].is_object());

  auto csv = run({"stability", path.string(), "--format", "csv", "--samples", "2"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("delta,usc_excess,lsc_deficiency,value_gap,lipschitz_quotient_max,"
                      "infeasible_fraction,unbounded_fraction\r\n", 0) == 0);
  int lines = 0;
  for (char ch : csv.out) lines += ch == '\n';
  CHECK(lines == 4);

  auto rec = nlohmann::json::parse(run({"recession", path.string()}).out);
  CHECK(rec["is_zero"] == true);
  auto reg = nlohmann::json::parse(run({"regularity", path.string()}).out);
  CHECK(reg["status"] == "regular");
}

TEST_CASE("outputs are deterministic under a fixed seed") {
  const auto path = scratch("lip3.json");
  REQUIRE(run({"repro", "lipschitz", "--n", "3", "--problem-only", "--out", path.string()}).code == 0);
  auto a = run({"stability", path.string(), "--seed", "7", "--samples", "3"});
  auto b = run({"stability", path.string(), "--seed", "7", "--samples", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto c = run({"stability", path.string(), "--seed", "8", "--samples", "3"});
  CHECK(a.out != c.out);
}

TEST_CASE("usage errors") {
  auto r = run({"solve", "--bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"solve"}).code == 1);
  CHECK(run({"--help"}).code == 0);

  const auto path = scratch("lip4.json");
  REQUIRE(run({"repro", "lipschitz", "--n", "2", "--problem-only", "--out", path.string()}).code == 0);
  CHECK(run({"solve", path.string(), "--input", path.string()}).code == 1);
  CHECK(run({"solve", path.string(), "--format", "csv"}).code == 1);
  CHECK(run({"solve", path.string(), "--out", "/nonexistent/dir/x.json"}).code == 1);
  CHECK(run({"stability", path.string(), "--radii", "0.01,0.1"}).code == 1);
  CHECK(run({"stability", path.string(), "--directed", "sideways"}).code == 1);
  CHECK(run({"repro", "nope"}).code == 1);
  CHECK(run({"solve", "/nonexistent/p.json"}).code == 1);
}
