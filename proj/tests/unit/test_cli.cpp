// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "restaurant/cli.hpp"
#include "restaurant/schema.hpp"
#include "restaurant/serialization.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "restaurant-game");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = restaurant::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "restaurant-cli-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

using restaurant::Json;

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"synth", "--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"synth", "0.5"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("synth") {
  const Run trine = run({"synth", "0.333333", "0.333333", "0.333334"});
  REQUIRE(trine.code == 0);
  const Json j = Json::parse(trine.out);
  CHECK(restaurant::schema::violations(j, "quantum_strategy").empty());
  for (const auto& w : j["weights"]) CHECK(w.get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
  const Run bad = run({"synth", "0.7", "0.2", "0.1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("InvalidGame") != std::string::npos);
  const Run ver = run({"synth", "0.64694", "0.23368", "0.11938", "--verify"});
  CHECK(ver.code == 0);
  CHECK(Json::parse(ver.out)["pass"] == true);
}

TEST_CASE("classical") {
  const Run r = run({"classical", "0.6666666666666666", "0.3333333333333334", "0", "--grid", "0.05"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["eps_c"].get<double>() < 1e-9);
  const Run csv = run({"classical", "0.5", "0.3", "0.2", "--grid", "0.1", "--refine", "1", "--csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("gamma1,gamma2,gamma3,eps_c\n", 0) == 0);
  CHECK(run({"classical", "0.5", "0.3", "0.2", "--grid", "0"}).code == 2);
}

TEST_CASE("compile, simulate, certify") {
  const auto strat = scratch("s.json");
  REQUIRE(run({"synth", "0.45", "0.35", "0.2", "--out", strat.string()}).code == 0);
  const Run comp = run({"compile", strat.string(), "--reflect", "2"});
  REQUIRE(comp.code == 0);
  const Json cfg = Json::parse(comp.out);
  CHECK(cfg["routing"]["reflected"] == 2);
  const auto cfg_path = scratch("c.json");
  write(cfg_path, comp.out);

  const auto game = scratch("g.json");
  write(game, R"({"gamma": [0.45, 0.35, 0.2]})");
  const Run a = run({"simulate", game.string(), "--shots", "4800", "--seed", "7", "--eps", "0", "--bootstrap", "20"});
  const Run b = run({"simulate", game.string(), "--shots", "4800", "--seed", "7", "--eps", "0", "--bootstrap", "20"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(restaurant::schema::violations(Json::parse(a.out), "experiment_result").empty());
  const Run opt = run({"simulate", game.string(), "--strategy", strat.string(), "--config", cfg_path.string(),
                       "--bootstrap", "0"});
  CHECK(opt.code == 0);

  const auto counts = scratch("counts.csv");
  REQUIRE(run({"simulate", game.string(), "--shots", "48000", "--csv", "--out", counts.string()}).code == 0);
  const auto cert = scratch("cert.json");
  const Run c = run({"certify", counts.string(), game.string(), "--grid", "0.05", "--bootstrap", "100", "--out",
                     cert.string()});
  REQUIRE(c.code == 0);
  std::ifstream cf(cert);
  const Json cj = Json::parse(cf);
  CHECK(cj["verdict"] == "pass");
  CHECK(run({"certify", "--recheck", cert.string()}).code == 0);

  const auto empty = scratch("empty.csv");
  write(empty, "closed,visited,count\n1,2,5\n");
  CHECK(run({"certify", empty.string(), game.string()}).code == 2);
  CHECK(run({"certify", scratch("missing.csv").string(), game.string()}).code == 2);
}

TEST_CASE("malformed files exit with code 2") {
  const auto p = scratch("broken.json");
  write(p, "{not json");
  CHECK(run({"compile", p.string()}).code == 2);
  write(p, R"({"gamma": [0.2, 0.3]})");
  CHECK(run({"simulate", p.string()}).code == 2);
}
