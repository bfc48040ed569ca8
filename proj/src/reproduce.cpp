// SPDX-License-Identifier: Apache-2.0
#include "restaurant/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "restaurant/error.hpp"
#include "restaurant/experiment.hpp"
#include "restaurant/polarimeter.hpp"
#include "restaurant/qstrategy.hpp"
#include "restaurant/reference_data.hpp"
#include "restaurant/schema.hpp"

namespace restaurant {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ComplexMat2 rot(double t) {
  ComplexMat2 r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

ComplexMat2 quarter(double deg, bool negative_retardance) {
  ComplexMat2 d = ComplexMat2::Identity();
  d(1, 1) = negative_retardance ? cplx(0, -1) : cplx(0, 1);
  return rot(deg * kDeg) * d * rot(-deg * kDeg);
}

double pairwise_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return bloch_angle_deg(a.normalized(), b.normalized());
}

std::array<double, 3> pairwise_angles(const std::array<Eigen::Vector3d, 3>& v) {
  return {pairwise_angle(v[0], v[1]), pairwise_angle(v[1], v[2]), pairwise_angle(v[0], v[2])};
}

struct GameRecord {
  Json json;
  std::string eps_row;
  std::string param_row;
};

// Everything computed for one reference game.
GameRecord evaluate_game(const ReferenceGame& ref, const ReproduceOptions& opt) {
  Prob3 gamma = normalize_user_probabilities(ref.gamma);
  const GameSpec spec = GameSpec::make(gamma);
  Json g;
  g["index"] = ref.index;
  g["gamma"] = gamma;

  const CurveParam a = curve_invert(gamma, 1e-4);
  const Prob3 on_curve = curve_gamma(a);
  double curve_res = 0.0;
  for (int i = 0; i < 3; ++i) curve_res = std::max(curve_res, std::abs(on_curve[i] - gamma[i]));
  g["a_param"] = a.value();
  g["curve_residual"] = curve_res;

  const ClassicalOptimum copt = optimize(spec, opt.classical);
  g["eps_c_computed"] = copt.eps_c;
  g["eps_c_reference"] = ref.eps_c;
  g["eps_c_abs_diff"] = std::abs(copt.eps_c - ref.eps_c);
  g["classical_strategy"] = to_json(copt.strategy);

  const QuantumStrategy q = synthesize(gamma);
  const double q_eps = quality_index(born_visit_matrix(q), spec);
  g["quantum_ideal_eps"] = q_eps;
  g["quantum_strategy"] = to_json(q);
  g["verify"] = to_json(verify(q, gamma));

  // The effect whose weight is 2/3 on this curve goes to the reflected port,
  // so every game uses the same split ratio f = 1/3.
  int reflect = 0;
  for (int y = 1; y < 3; ++y)
    if (std::abs(q.weights[y] - 2.0 / 3.0) < std::abs(q.weights[reflect] - 2.0 / 3.0)) reflect = y;
  const Rank1Povm povm = Rank1Povm::from_strategy(q);
  OpticalStrategy optical{compile(povm, reflect), q.encodings};
  const auto fwd = forward_effects(optical.config);
  const auto target = povm.ops();
  double compile_err = 0.0;
  for (int y = 0; y < 3; ++y) compile_err = std::max(compile_err, frobenius_distance(fwd[y], target[y]));
  g["polarimeter_config"] = to_json(optical.config);
  g["polarimeter_round_trip"] = compile_err;

  double sum_eps = 0.0;
  double sum_f = 0.0;
  double sum_stderr = 0.0;
  int beats_classical = 0;
  for (int s = 0; s < opt.seeds; ++s) {
    ExperimentConfig ec;
    ec.shots = opt.shots;
    ec.seed = opt.seed0 + static_cast<std::uint64_t>(s);
    ec.bootstrap_resamples = s == 0 ? opt.bootstrap_resamples : 0;
    const ExperimentResult r = simulate(spec, optical, NoiseModel{}, ec);
    sum_eps += r.eps_q;
    sum_f += r.overlap_f;
    if (s == 0) sum_stderr = r.eps_q_stderr;
    if (r.eps_q < copt.eps_c) ++beats_classical;
  }
  const double n = std::max(1, opt.seeds);
  g["simulated_eps_q"] = sum_eps / n;
  g["simulated_eps_q_stderr"] = sum_stderr;
  g["overlap_f"] = sum_f / n;
  g["seeds_beating_classical"] = beats_classical;
  g["eps_q_reference_noisy"] = ref.eps_q_noisy;

  const double slope = depolarizing_slope(q, spec);
  g["depolarizing_slope"] = slope;
  try {
    g["advantage_threshold"] = advantage_threshold(spec, q, copt.eps_c);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoAdvantage) throw;
    g["advantage_threshold"] = nullptr;
  }

  // Rotation-invariant comparison against the transcribed strategy.
  std::array<Eigen::Vector3d, 3> ours;
  for (int x = 0; x < 3; ++x) ours[x] = q.bloch(x);
  const auto ang_ours = pairwise_angles(ours);
  const auto ang_ref = pairwise_angles(ref.encodings);
  const double wsum = ref.mo_weights[0] + ref.mo_weights[1] + ref.mo_weights[2];
  Json t;
  t["mo_weights"] = ref.mo_weights;
  t["mo_weight_sum"] = wsum;
  t["pairwise_angles_deg"] = ang_ref;
  t["pairwise_angle_sum_deg"] = ang_ref[0] + ang_ref[1] + ang_ref[2];
  const QuantumStrategy tq = QuantumStrategy::from_bloch(ref.encodings, ref.mo_weights);
  Eigen::Matrix3d p = born_probabilities(tq).cwiseMax(0.0);
  for (int x = 0; x < 3; ++x) p.row(x) /= p.row(x).sum();
  const Prob3 tp = visiting_probs(VisitMatrix(p));
  double tdev = 0.0;
  for (int y = 0; y < 3; ++y) tdev = std::max(tdev, std::abs(tp[y] - gamma[y]));
  t["visiting_probs_from_table"] = tp;
  t["visiting_probs_max_dev"] = tdev;
  g["reference_table"] = t;
  g["pairwise_angles_deg"] = ang_ours;

  std::ostringstream eps_row;
  eps_row << std::setprecision(10) << ref.index << ',' << gamma[0] << ',' << gamma[1] << ',' << gamma[2] << ','
          << a.value() << ',' << ref.eps_c << ',' << copt.eps_c << ',' << std::abs(copt.eps_c - ref.eps_c) << ','
          << q_eps << ',' << ref.eps_q_noisy << ',' << sum_eps / n << ',' << sum_f / n;
  std::ostringstream par;
  par << std::setprecision(10) << ref.index;
  for (int x = 0; x < 3; ++x) par << ',' << ours[x].x() << ',' << ours[x].y() << ',' << ours[x].z();
  for (double w : q.weights) par << ',' << w;
  for (double w : ref.mo_weights) par << ',' << w;
  for (double v : ang_ours) par << ',' << v;
  for (double v : ang_ref) par << ',' << v;
  par << ',' << optical.config.f;
  for (double v : optical.config.u2.angles()) par << ',' << v;
  for (double v : optical.config.u4.angles()) par << ',' << v;
  return {g, eps_row.str(), par.str()};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + p.string());
  f << text;
}

}  // namespace

std::string JonesConvention::name() const {
  std::string s = reversed_order ? "q2-h-q1" : "q1-h-q2";
  s += negative_retardance ? ",ret-" : ",ret+";
  s += negative_angles ? ",angle-" : ",angle+";
  s += flip_y ? ",y-" : ",y+";
  return s;
}

Eigen::Vector3d JonesConvention::prepare(const std::array<double, 3>& angles_deg) const {
  std::array<double, 3> a = angles_deg;
  if (negative_angles)
    for (double& x : a) x = -x;
  if (reversed_order) std::swap(a[0], a[2]);
  const ComplexMat2 u = quarter(a[2], negative_retardance) * hwp(a[1]) * quarter(a[0], negative_retardance);
  Eigen::Vector3d b = state_to_bloch(apply_unitary(u, PureState())).vec();
  if (flip_y) b.y() = -b.y();
  return b;
}

std::vector<ConventionScore> convention_search() {
  const ReferenceData& ref = reference_data();
  std::vector<ConventionScore> out;
  for (int bits = 0; bits < 16; ++bits) {
    ConventionScore s;
    s.convention = {(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
    int n = 0;
    for (const auto& g : ref.games) {
      for (int k = 0; k < 3; ++k) {
        const double err = bloch_angle_deg(s.convention.prepare(g.u1_angles[k]), g.encodings[k].normalized());
        s.mean_error_deg += err;
        s.max_error_deg = std::max(s.max_error_deg, err);
        if (err <= 5.0) ++s.matches_within_5deg;
        ++n;
      }
    }
    s.mean_error_deg /= n;
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ConventionScore& a, const ConventionScore& b) { return a.mean_error_deg < b.mean_error_deg; });
  return out;
}

std::vector<Prob3> hexagon_grid(int divisions) {
  if (divisions < 3) throw Error(ErrorKind::InvalidInput, "heat-map grid needs at least 3 divisions");
  std::vector<Prob3> pts;
  const double n = divisions;
  for (int i = 0; i <= divisions; ++i)
    for (int j = 0; i + j <= divisions; ++j) {
      const int k = divisions - i - j;
      if (3 * std::max({i, j, k}) > 2 * divisions) continue;
      pts.push_back({i / n, j / n, k / n});
    }
  return pts;
}

std::vector<HeatPoint> heat_map(int divisions, const OptimizeOptions& opt) {
  std::vector<HeatPoint> out;
  for (const Prob3& g : hexagon_grid(divisions)) {
    HeatPoint h;
    h.gamma = g;
    h.eps_c = optimize(GameSpec::make(g), opt).eps_c;
    h.winnable = classically_winnable(g, 1e-9);
    h.tolerance_band = !h.winnable && classically_winnable(g, 1.0 / divisions + 1e-9);
    out.push_back(h);
  }
  return out;
}

Json reproduce(const ReproduceOptions& opt, std::ostream& log) {
  const ReferenceData& ref = reference_data();
  if (ref.games.size() != 10) throw Error(ErrorKind::InvalidInput, "reference data must list ten games");
  if (opt.seeds < 1) throw Error(ErrorKind::InvalidInput, "at least one simulation seed is required");

  std::vector<GameRecord> records(ref.games.size());
  std::mutex log_mutex;
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(records.size())));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < records.size(); i += threads) {
          records[i] = evaluate_game(ref.games[i], opt);
          std::lock_guard<std::mutex> lock(log_mutex);
          log << "game " << ref.games[i].index << ": eps_c " << records[i].json["eps_c_computed"].get<double>()
              << " (reference " << ref.games[i].eps_c << ")\n";
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Json report;
  Json settings;
  settings["grid_step"] = opt.classical.grid_step;
  settings["refine_rounds"] = opt.classical.refine_rounds;
  settings["shots"] = opt.shots;
  settings["seeds"] = opt.seeds;
  settings["seed0"] = opt.seed0;
  settings["bootstrap_resamples"] = opt.bootstrap_resamples;
  settings["bootstrap_note"] = "standard deviation of the index over multinomial row resamples of the first seed";
  settings["heat_map_step"] = opt.heat_map ? 1.0 / opt.heat_divisions : 0.0;
  settings["heat_map_sender_grid"] = opt.heat_classical.grid_step;
  settings["heat_map_refine_rounds"] = opt.heat_classical.refine_rounds;
  report["settings"] = settings;

  Json games = Json::array();
  double max_diff = 0.0;
  double max_q = 0.0;
  double mean_f = 0.0;
  double max_wsum_dev = 0.0;
  bool thresholds_positive = true;
  bool every_seed_margin = true;
  for (const auto& r : records) {
    games.push_back(r.json);
    max_diff = std::max(max_diff, r.json["eps_c_abs_diff"].get<double>());
    max_q = std::max(max_q, r.json["quantum_ideal_eps"].get<double>());
    mean_f += r.json["overlap_f"].get<double>() / records.size();
    max_wsum_dev = std::max(max_wsum_dev, std::abs(r.json["reference_table"]["mo_weight_sum"].get<double>() - 2.0));
    if (r.json["eps_c_computed"].get<double>() > 0.01) {
      thresholds_positive = thresholds_positive && r.json["advantage_threshold"].is_number() &&
                            r.json["advantage_threshold"].get<double>() > 0.0;
    }
    every_seed_margin = every_seed_margin && r.json["seeds_beating_classical"].get<int>() * 100 >= 99 * opt.seeds;
  }
  report["games"] = games;
  Json summary;
  summary["max_eps_c_abs_diff"] = max_diff;
  summary["max_quantum_ideal_eps"] = max_q;
  summary["mean_overlap_f"] = mean_f;
  summary["max_mo_weight_sum_deviation"] = max_wsum_dev;
  report["summary"] = summary;
  Json verdicts;
  verdicts["classical_within_2e-3"] = max_diff <= 2e-3;
  verdicts["quantum_ideal_below_1e-9"] = max_q <= 1e-9;
  verdicts["mo_weights_sum_to_2"] = max_wsum_dev <= 1e-3;
  verdicts["mean_overlap_at_least_0.999"] = mean_f >= 0.999;
  verdicts["quantum_beats_classical_in_99pct_of_seeds"] = every_seed_margin;
  verdicts["advantage_threshold_positive"] = thresholds_positive;
  report["verdicts"] = verdicts;

  Json conv = Json::array();
  std::ostringstream conv_csv;
  conv_csv << "convention,mean_error_deg,max_error_deg,matches_within_5deg\n";
  for (const auto& s : convention_search()) {
    conv.push_back({{"convention", s.convention.name()},
                    {"mean_error_deg", s.mean_error_deg},
                    {"max_error_deg", s.max_error_deg},
                    {"matches_within_5deg", s.matches_within_5deg}});
    conv_csv << '"' << s.convention.name() << '"' << ',' << s.mean_error_deg << ',' << s.max_error_deg << ','
             << s.matches_within_5deg << '\n';
  }
  report["convention_search"] = conv;

  std::ostringstream heat_csv;
  if (opt.heat_map) {
    log << "heat map: " << hexagon_grid(opt.heat_divisions).size() << " games\n";
    heat_csv << "gamma1,gamma2,gamma3,eps_c,winnable,tolerance_band\n" << std::setprecision(10);
    int mismatches = 0;
    for (const auto& h : heat_map(opt.heat_divisions, opt.heat_classical)) {
      heat_csv << h.gamma[0] << ',' << h.gamma[1] << ',' << h.gamma[2] << ',' << h.eps_c << ','
               << (h.winnable ? 1 : 0) << ',' << (h.tolerance_band ? 1 : 0) << '\n';
      if (h.tolerance_band) continue;
      if ((h.eps_c <= 1e-3) != h.winnable) ++mismatches;
    }
    report["summary"]["heat_map_boundary_mismatches"] = mismatches;
    report["verdicts"]["winnable_iff_boundary"] = mismatches == 0;
  }

  schema::validate(report, "repro_report");

  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    write_text(opt.out_dir / "report.json", report.dump(2) + "\n");
    std::string eps = "index,gamma1,gamma2,gamma3,a_param,eps_c_reference,eps_c_computed,eps_c_abs_diff,"
                      "quantum_ideal_eps,eps_q_reference_noisy,simulated_eps_q,overlap_f\n";
    std::string par = "index,n1x,n1y,n1z,n2x,n2y,n2z,n3x,n3y,n3z,lambda1,lambda2,lambda3,"
                      "lambda1_reference,lambda2_reference,lambda3_reference,angle12,angle23,angle13,"
                      "angle12_reference,angle23_reference,angle13_reference,f,u2_q1,u2_h,u2_q2,u4_q1,u4_h,u4_q2\n";
    for (const auto& r : records) {
      eps += r.eps_row + "\n";
      par += r.param_row + "\n";
    }
    write_text(opt.out_dir / "table_eps.csv", eps);
    write_text(opt.out_dir / "table_params.csv", par);
    write_text(opt.out_dir / "convention_search.csv", conv_csv.str());
    if (opt.heat_map) write_text(opt.out_dir / "hexagon_heat.csv", heat_csv.str());
  }
  return report;
}

}  // namespace restaurant
