// SPDX-License-Identifier: Apache-2.0
#include "restaurant/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "restaurant/error.hpp"
#include "restaurant/reproduce.hpp"
#include "restaurant/schema.hpp"
#include "restaurant/serialization.hpp"

namespace restaurant::cli {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::Infeasible:
    case ErrorKind::Unbounded:
    case ErrorKind::DegenerateGeometry:
    case ErrorKind::DegenerateSplit:
    case ErrorKind::NoAdvantage:
      return kSolverFailure;
    default:
      return kInvalidInput;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Counts read_counts(const std::string& path) {
  if (ends_with(path, ".csv")) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    return read_counts_csv(f);
  }
  return counts_from_json(read_json(path));
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + out_path);
  f << text;
}

void emit_json(const Json& doc, std::string_view schema_name, const std::string& out_path, std::ostream& out) {
  if (!schema_name.empty()) schema::validate(doc, schema_name);
  emit(doc.dump(2) + "\n", out_path, out);
}

Prob3 gamma_from(const std::vector<double>& v, std::ostream& err) {
  if (v.size() != 3) throw Error(ErrorKind::InvalidInput, "expected three probabilities");
  std::string warning;
  const Prob3 g = normalize_user_probabilities({v[0], v[1], v[2]}, &warning);
  if (!warning.empty()) err << "warning: " << warning << "\n";
  return g;
}

std::string csv_number(double x) {
  std::ostringstream ss;
  ss << std::setprecision(12) << x;
  return ss.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strategies, classical bounds, optics and certification for the three-restaurant game"};
  app.require_subcommand(1);
  std::string out_path;

  // synth
  auto* synth = app.add_subcommand("synth", "Perfect qubit strategy for a game");
  std::vector<double> synth_gamma;
  bool synth_verify = false;
  synth->add_option("gamma", synth_gamma, "Target visiting probabilities g1 g2 g3")->expected(3)->required();
  synth->add_flag("--verify", synth_verify, "Print the verification report instead of the strategy");
  synth->add_option("--out", out_path, "Write the JSON here instead of stdout");

  // classical
  auto* classical = app.add_subcommand("classical", "Optimal classical one-bit strategy");
  std::vector<double> cl_gamma;
  OptimizeOptions cl_opt;
  double cl_k1 = 1.0 / 3.0;
  double cl_k2 = 1.0;
  bool cl_csv = false;
  classical->add_option("gamma", cl_gamma, "Target visiting probabilities g1 g2 g3")->expected(3)->required();
  classical->add_option("--grid", cl_opt.grid_step, "Sender grid step")->capture_default_str();
  classical->add_option("--refine", cl_opt.refine_rounds, "Refinement rounds")->capture_default_str();
  classical->add_option("--k1", cl_k1, "Weight of the closed-restaurant penalty")->capture_default_str();
  classical->add_option("--k2", cl_k2, "Weight of the distribution penalty")->capture_default_str();
  classical->add_option("--threads", cl_opt.threads, "Worker threads (result does not depend on this)")
      ->capture_default_str();
  classical->add_flag("--csv", cl_csv, "Print gamma1,gamma2,gamma3,eps_c as CSV");
  classical->add_flag("--json", "JSON output (default)");
  classical->add_option("--out", out_path, "Write the output here instead of stdout");

  // compile
  auto* comp = app.add_subcommand("compile", "Polarimeter settings for a strategy's measurement");
  std::string comp_file;
  int comp_reflect = 0;
  comp->add_option("strategy", comp_file, "Quantum strategy JSON")->required();
  comp->add_option("--reflect", comp_reflect, "Restaurant (1-3) sent to the reflected port; default: smallest weight")
      ->check(CLI::Range(1, 3));
  comp->add_option("--out", out_path, "Write the JSON here instead of stdout");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Seeded photon-counting simulation");
  std::string sim_game;
  std::string sim_strategy;
  std::string sim_config;
  bool sim_optical = false;
  bool sim_csv = false;
  ExperimentConfig sim_cfg;
  NoiseModel sim_noise;
  sim->add_option("game", sim_game, "Game JSON")->required();
  sim->add_option("--strategy", sim_strategy, "Quantum strategy JSON; default: synthesized for the game");
  sim->add_option("--config", sim_config, "Polarimeter config JSON; implies --optical");
  sim->add_flag("--optical", sim_optical, "Measure through the compiled polarimeter instead of the ideal POVM");
  sim->add_option("--shots", sim_cfg.shots, "Photons")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_cfg.seed, "Random seed")->capture_default_str();
  sim->add_option("--eps", sim_noise.depolarizing, "Depolarizing strength")->capture_default_str();
  sim->add_option("--jitter", sim_noise.angle_jitter_deg, "Wave-plate angle jitter, degrees (std-dev)")
      ->capture_default_str();
  sim->add_option("--bootstrap", sim_cfg.bootstrap_resamples, "Bootstrap resamples for the standard error")
      ->capture_default_str();
  sim->add_flag("--csv", sim_csv, "Print the counts as CSV");
  sim->add_flag("--json", "JSON output (default)");
  sim->add_option("--out", out_path, "Write the output here instead of stdout");

  // certify
  auto* cert = app.add_subcommand("certify", "Certify a quantum advantage from observed counts");
  std::string cert_counts;
  std::string cert_game;
  std::string cert_recheck;
  CertifyOptions cert_opt;
  cert->add_option("counts", cert_counts, "Counts (.csv or .json)");
  cert->add_option("game", cert_game, "Game JSON");
  cert->add_option("--z", cert_opt.z, "Required separation in standard errors")->capture_default_str();
  cert->add_option("--grid", cert_opt.optimize.grid_step, "Classical sender grid step")->capture_default_str();
  cert->add_option("--refine", cert_opt.optimize.refine_rounds, "Classical refinement rounds")->capture_default_str();
  cert->add_option("--bootstrap", cert_opt.bootstrap_resamples, "Bootstrap resamples")->capture_default_str();
  cert->add_option("--bootstrap-seed,--seed", cert_opt.bootstrap_seed, "Bootstrap seed")->capture_default_str();
  cert->add_option("--recheck", cert_recheck,
                   "Recompute a certificate from its own inputs; exits 2 if the verdict or numbers differ");
  cert->add_option("--out", out_path, "Write the JSON here instead of stdout");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Regenerate the ten-game report, tables and heat map");
  ReproduceOptions rep_opt;
  std::string rep_dir;
  bool rep_no_heat = false;
  rep->add_option("--out", rep_dir, "Output directory")->required();
  rep->add_option("--grid", rep_opt.classical.grid_step, "Classical sender grid step")->capture_default_str();
  rep->add_option("--refine", rep_opt.classical.refine_rounds, "Classical refinement rounds")->capture_default_str();
  rep->add_option("--shots", rep_opt.shots, "Photons per simulated run")->capture_default_str();
  rep->add_option("--seeds", rep_opt.seeds, "Simulated runs per game")->capture_default_str();
  rep->add_option("--seed", rep_opt.seed0, "First simulation seed")->capture_default_str();
  rep->add_option("--bootstrap", rep_opt.bootstrap_resamples, "Bootstrap resamples")->capture_default_str();
  rep->add_option("--heat-divisions", rep_opt.heat_divisions, "Heat-map barycentric divisions")
      ->capture_default_str();
  rep->add_flag("--no-heat-map", rep_no_heat, "Skip the hexagon heat map");
  rep->add_option("--threads", rep_opt.threads, "Games evaluated concurrently")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (synth->parsed()) {
      const Prob3 g = gamma_from(synth_gamma, err);
      const QuantumStrategy s = synthesize(g);
      if (synth_verify) {
        const VerifyReport r = verify(s, g);
        emit_json(to_json(r), "verify_report", out_path, out);
        return r.pass ? kOk : kSolverFailure;
      }
      emit_json(to_json(s), "quantum_strategy", out_path, out);
    } else if (classical->parsed()) {
      const GameSpec spec = GameSpec::make(gamma_from(cl_gamma, err), cl_k1, cl_k2);
      const ClassicalOptimum opt = optimize(spec, cl_opt);
      if (cl_csv) {
        emit("gamma1,gamma2,gamma3,eps_c\n" + csv_number(spec.gamma[0]) + "," + csv_number(spec.gamma[1]) + "," +
                 csv_number(spec.gamma[2]) + "," + csv_number(opt.eps_c) + "\n",
             out_path, out);
      } else {
        emit_json(to_json(opt, spec), "classical_result", out_path, out);
      }
    } else if (comp->parsed()) {
      const Json doc = read_json(comp_file);
      schema::validate(doc, "quantum_strategy");
      const Rank1Povm povm = Rank1Povm::from_strategy(strategy_from_json(doc));
      const PolarimeterConfig cfg = comp_reflect > 0 ? compile(povm, comp_reflect - 1) : compile(povm);
      emit_json(to_json(cfg), "polarimeter_config", out_path, out);
    } else if (sim->parsed()) {
      const Json game_doc = read_json(sim_game);
      schema::validate(game_doc, "game");
      std::string warning;
      const GameSpec spec = game_from_json(game_doc, &warning);
      if (!warning.empty()) err << "warning: " << warning << "\n";
      QuantumStrategy q;
      if (sim_strategy.empty()) {
        q = synthesize(spec.gamma);
      } else {
        const Json sd = read_json(sim_strategy);
        schema::validate(sd, "quantum_strategy");
        q = strategy_from_json(sd);
      }
      Strategy strategy = q;
      if (!sim_config.empty()) {
        const Json cd = read_json(sim_config);
        schema::validate(cd, "polarimeter_config");
        strategy = OpticalStrategy{config_from_json(cd), q.encodings};
      } else if (sim_optical) {
        strategy = OpticalStrategy::compile_from(q);
      }
      sim_cfg.prior = spec.prior;
      const ExperimentResult r = simulate(spec, strategy, sim_noise, sim_cfg);
      if (sim_csv) {
        std::ostringstream ss;
        write_counts_csv(ss, r.counts);
        emit(ss.str(), out_path, out);
      } else {
        emit_json(to_json(r), "experiment_result", out_path, out);
      }
    } else if (cert->parsed()) {
      if (!cert_recheck.empty()) {
        const Json doc = read_json(cert_recheck);
        schema::validate(doc, "certificate");
        const Certificate old = certificate_from_json(doc);
        CertifyOptions o;
        o.z = old.z;
        o.bootstrap_resamples = old.bootstrap_resamples;
        o.bootstrap_seed = old.bootstrap_seed;
        o.optimize.grid_step = old.grid_step;
        o.optimize.refine_rounds = old.refine_rounds;
        const Certificate fresh = certify(old.counts, old.game, o);
        const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
        const bool same = fresh.pass == old.pass && close(fresh.eps_v, old.eps_v) &&
                          close(fresh.eps_c, old.eps_c) && close(fresh.eps_v_stderr, old.eps_v_stderr);
        emit_json(to_json(fresh), "certificate", out_path, out);
        if (!same) {
          err << "recheck: recomputed certificate differs from " << cert_recheck << "\n";
          return kInvalidInput;
        }
        return kOk;
      }
      if (cert_counts.empty() || cert_game.empty())
        throw Error(ErrorKind::InvalidInput, "certify needs a counts file and a game file (or --recheck)");
      const Json game_doc = read_json(cert_game);
      schema::validate(game_doc, "game");
      const Certificate c = certify(read_counts(cert_counts), game_from_json(game_doc), cert_opt);
      emit_json(to_json(c), "certificate", out_path, out);
    } else if (rep->parsed()) {
      rep_opt.out_dir = rep_dir;
      rep_opt.heat_map = !rep_no_heat;
      const Json report = reproduce(rep_opt, err);
      out << "wrote " << rep_dir << "/report.json\n";
      for (const auto& [name, ok] : report["verdicts"].items())
        out << (ok.get<bool>() ? "PASS " : "FAIL ") << name << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace restaurant::cli
