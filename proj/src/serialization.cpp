// SPDX-License-Identifier: Apache-2.0
#include "restaurant/serialization.hpp"

#include <cmath>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(std::string(what) + " must be finite");
  return v;
}

template <std::size_t N>
std::array<double, N> numbers(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != N) bad(std::string(what) + " must be an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], what);
  return out;
}

double round4(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Json triple(const WavePlateTriple& w) {
  return Json::array({round4(w.quarter_first()), round4(w.half()), round4(w.quarter_second())});
}

WavePlateTriple triple_from(const Json& j, const char* what) {
  const auto a = numbers<3>(j, what);
  return {a[0], a[1], a[2]};
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json matrix_to_json(const Eigen::Matrix3d& m) {
  Json out = Json::array();
  for (int r = 0; r < 3; ++r) out.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return out;
}

Json to_json(const GameSpec& g) {
  Json j;
  j["gamma"] = g.gamma;
  j["k1"] = g.k1;
  j["k2"] = g.k2;
  j["prior"] = g.prior;
  return j;
}

GameSpec game_from_json(const Json& j, std::string* warning) {
  const Prob3 gamma = normalize_user_probabilities(numbers<3>(field(j, "gamma"), "gamma"), warning);
  const double k1 = j.contains("k1") ? number(j["k1"], "k1") : 1.0 / 3.0;
  const double k2 = j.contains("k2") ? number(j["k2"], "k2") : 1.0;
  const Prob3 prior = j.contains("prior") ? normalize_user_probabilities(numbers<3>(j["prior"], "prior")) : kUniform;
  return GameSpec::make(gamma, k1, k2, prior);
}

Json to_json(const QuantumStrategy& s) {
  Json j;
  Json enc = Json::array();
  for (int x = 0; x < 3; ++x) {
    const Eigen::Vector3d b = s.bloch(x);
    enc.push_back(Json::array({b.x(), b.y(), b.z()}));
  }
  j["encodings"] = enc;
  j["weights"] = s.weights;
  return j;
}

QuantumStrategy strategy_from_json(const Json& j) {
  const Json& enc = field(j, "encodings");
  if (!enc.is_array() || enc.size() != 3) bad("encodings must hold three Bloch vectors");
  std::array<Eigen::Vector3d, 3> v;
  for (int i = 0; i < 3; ++i) {
    const auto a = numbers<3>(enc[i], "encoding");
    v[i] = {a[0], a[1], a[2]};
  }
  return QuantumStrategy::from_bloch(v, numbers<3>(field(j, "weights"), "weights"));
}

Json to_json(const VerifyReport& r) {
  Json j;
  j["completeness_residual"] = r.completeness_residual;
  j["weight_sum_residual"] = r.weight_sum_residual;
  j["min_weight"] = r.min_weight;
  j["coplanarity_residual"] = r.coplanarity_residual;
  j["h1_residual"] = r.h1_residual;
  j["distribution_residual"] = r.distribution_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const ClassicalStrategy& cs) {
  Json j;
  j["sender"] = cs.sender;
  j["receiver"] = cs.receiver;
  return j;
}

Json to_json(const ClassicalOptimum& opt, const GameSpec& g) {
  Json j;
  j["gamma"] = g.gamma;
  j["k1"] = g.k1;
  j["k2"] = g.k2;
  j["eps_c"] = opt.eps_c;
  j["sender"] = opt.strategy.sender;
  j["receiver"] = opt.strategy.receiver;
  j["grid_step"] = opt.grid_step;
  j["refine_rounds"] = opt.refine_rounds;
  j["lp_solves"] = opt.lp_solves;
  return j;
}

Json to_json(const PolarimeterConfig& cfg) {
  Json j;
  j["f"] = cfg.f;
  j["u2"] = triple(cfg.u2);
  j["u3"] = triple(cfg.u3);
  j["u4"] = triple(cfg.u4);
  Json routing;
  routing["transmitted_h"] = cfg.routing[0] + 1;
  routing["transmitted_v"] = cfg.routing[1] + 1;
  routing["reflected"] = cfg.routing[2] + 1;
  j["routing"] = routing;
  j["dump"] = cfg.dump == DumpPort::ReflectedV ? "reflected_v" : "reflected_h";
  return j;
}

PolarimeterConfig config_from_json(const Json& j) {
  PolarimeterConfig cfg;
  cfg.f = number(field(j, "f"), "f");
  cfg.u2 = triple_from(field(j, "u2"), "u2");
  cfg.u3 = triple_from(field(j, "u3"), "u3");
  cfg.u4 = triple_from(field(j, "u4"), "u4");
  const Json& r = field(j, "routing");
  const char* keys[3] = {"transmitted_h", "transmitted_v", "reflected"};
  for (int d = 0; d < 3; ++d) {
    const Json& v = field(r, keys[d]);
    if (!v.is_number_integer()) bad("routing entries must be restaurant labels 1..3");
    cfg.routing[d] = v.get<int>() - 1;
  }
  if (j.contains("dump")) {
    const Json& d = j["dump"];
    if (d == "reflected_v") {
      cfg.dump = DumpPort::ReflectedV;
    } else if (d == "reflected_h") {
      cfg.dump = DumpPort::ReflectedH;
    } else {
      bad("dump must be \"reflected_v\" or \"reflected_h\"");
    }
  }
  cfg.validate();
  return cfg;
}

Json counts_to_json(const Counts& c) {
  Json rows = Json::array();
  for (const auto& row : c) rows.push_back(row);
  return rows;
}

Counts counts_from_json(const Json& j) {
  const Json& rows = j.is_object() ? field(j, "counts") : j;
  if (!rows.is_array() || rows.size() != 3) bad("counts must be a 3x3 array");
  Counts c{};
  for (int x = 0; x < 3; ++x) {
    if (!rows[x].is_array() || rows[x].size() != 3) bad("counts must be a 3x3 array");
    for (int y = 0; y < 3; ++y) {
      const Json& v = rows[x][y];
      if (!v.is_number_integer() || v.get<long long>() < 0) bad("counts must be non-negative integers");
      c[x][y] = v.get<std::uint64_t>();
    }
  }
  return c;
}

Json to_json(const NoiseModel& n) {
  Json j;
  j["depolarizing"] = n.depolarizing;
  j["angle_jitter_deg"] = n.angle_jitter_deg;
  return j;
}

Json to_json(const ExperimentResult& r) {
  Json j;
  j["seed"] = r.seed;
  j["shots"] = r.shots;
  j["noise"] = to_json(r.noise);
  j["counts"] = counts_to_json(r.counts);
  j["visit_estimate"] = matrix_to_json(r.visit_estimate);
  j["p_hat"] = r.p_hat;
  j["overlap_f"] = r.overlap_f;
  j["eps_q"] = r.eps_q;
  j["eps_q_stderr"] = r.eps_q_stderr;
  j["bootstrap_resamples"] = r.bootstrap_resamples;
  j["dump_fraction"] = r.dump_fraction;
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  j["game"] = to_json(c.game);
  j["counts"] = counts_to_json(c.counts);
  j["z"] = c.z;
  j["bootstrap_resamples"] = c.bootstrap_resamples;
  j["bootstrap_seed"] = c.bootstrap_seed;
  j["eps_v"] = c.eps_v;
  j["eps_v_stderr"] = c.eps_v_stderr;
  j["eps_c"] = c.eps_c;
  j["classical_grid"] = {{"grid_step", c.grid_step}, {"refine_rounds", c.refine_rounds}};
  j["margin"] = c.margin;
  j["verdict"] = c.pass ? "pass" : "fail";
  j["sigmas"] = finite_or_null(c.sigmas);
  j["confidence_note"] = c.confidence_note;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.game = game_from_json(field(j, "game"));
  c.counts = counts_from_json(field(j, "counts"));
  c.z = number(field(j, "z"), "z");
  const Json& b = field(j, "bootstrap_resamples");
  if (!b.is_number_integer()) bad("bootstrap_resamples must be an integer");
  c.bootstrap_resamples = b.get<int>();
  const Json& s = field(j, "bootstrap_seed");
  if (!s.is_number_unsigned()) bad("bootstrap_seed must be a non-negative integer");
  c.bootstrap_seed = s.get<std::uint64_t>();
  c.eps_v = number(field(j, "eps_v"), "eps_v");
  c.eps_v_stderr = number(field(j, "eps_v_stderr"), "eps_v_stderr");
  c.eps_c = number(field(j, "eps_c"), "eps_c");
  const Json& grid = field(j, "classical_grid");
  c.grid_step = number(field(grid, "grid_step"), "grid_step");
  c.refine_rounds = field(grid, "refine_rounds").get<int>();
  c.margin = number(field(j, "margin"), "margin");
  c.pass = field(j, "verdict") == "pass";
  return c;
}

}  // namespace restaurant
