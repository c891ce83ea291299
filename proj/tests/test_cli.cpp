#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(EULAB_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("verify subcommand") {
  const auto r = run("verify --model klein --samples 10000");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["max_residual"].get<double>() < 1e-9);
  CHECK(j["residuals"].size() == 4);
  CHECK(j["model"] == "klein");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("verify --model klein --samples 0").code == 2);
  CHECK(run("verify --model unknown-model").code == 2);
  CHECK(run("verify --no-such-flag").code == 2);
  CHECK(run("stabilize --model shear").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("numerical failure exits with code 1") {
  const auto r = run("periodic --model contact --guess 0.3,0.3,0");
  CHECK(r.code == 1);
  CHECK(r.out.find("numerical failure") != std::string::npos);
}

TEST_CASE("periodic subcommand finds the hyperbolic core orbit") {
  const auto r = run("periodic --model contact --guess 0.01,0.01,0");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["class"] == "hyperbolic");
  CHECK(j["period"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j["multipliers"][0][0].get<double>() ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-6));
}

TEST_CASE("orbit subcommand emits csv") {
  const auto r = run("orbit --model klein --start 0,0.3,0.4 --time 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,chart,x,y,z\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') > 2);
}

TEST_CASE("current sweep emits csv") {
  const auto r = run("current --sweep 1.1:1.9:4 --form lambda");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("r,c_r\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
}

TEST_CASE("stabilize subcommand reports a passing rescaled structure") {
  const auto r = run("stabilize --model klein --samples 500");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["shs_after_rescale"]["pass"] == true);
  CHECK(j["shs_after_rescale"]["max_residual"].get<double>() < 1e-9);
}

TEST_CASE("counterexample subcommand") {
  const auto r = run("counterexample --t 1,2,1,3 --samples 300");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["certificate"]["kind"] == "infeasible_nonzero_c");
  const auto r2 = run("counterexample --t 1,2,1,2 --samples 300");
  REQUIRE(r2.code == 0);
  CHECK(nlohmann::json::parse(r2.out)["certificate"]["kind"] == "one_parameter_family");

  // --out writes the same report to a file
  const std::string path = "/tmp/eulab_cli_report.json";
  std::remove(path.c_str());
  const auto r3 = run("counterexample --t 1,2,1,3 --samples 300 --out " + path);
  REQUIRE(r3.code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["certificate"]["kind"] == "infeasible_nonzero_c");
  std::remove(path.c_str());
}

TEST_CASE("repeated runs are byte-identical") {
  const auto a = run("verify --model shear --samples 2000 --seed 7");
  const auto b = run("verify --model shear --samples 2000 --seed 7");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run("counterexample --t 1,2,1,3 --samples 200");
  const auto d = run("counterexample --t 1,2,1,3 --samples 200");
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
  // a different seed samples differently
  const auto e = run("verify --model shear --samples 2000 --seed 8");
  CHECK(a.out != e.out);
}

TEST_CASE("config file with flag overrides") {
  const std::string path = "/tmp/eulab_cli_config.json";
  {
    std::ofstream cfg(path);
    cfg << R"({"model": "shear", "samples": 500})";
  }
  const auto r = run("--config " + path + " verify");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["model"] == "shear");
  CHECK(j["samples"] == 500);

  const auto o = run("--config " + path + " verify --model klein");
  REQUIRE(o.code == 0);
  CHECK(nlohmann::json::parse(o.out)["model"] == "klein");
  std::remove(path.c_str());
}
