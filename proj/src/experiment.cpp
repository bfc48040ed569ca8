// SPDX-License-Identifier: Apache-2.0
#include "restaurant/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "restaurant/error.hpp"

namespace restaurant {

namespace rng {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t h = mix(mix(mix(seed) ^ stream) ^ counter);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = 1.0 - uniform(seed, stream, 2 * counter);  // (0, 1]
  const double u2 = uniform(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t binomial(std::uint64_t n, double p, double u) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
  const std::uint64_t m = std::min(mode, n);
  const auto log_pmf = [&](double k) {
    return std::lgamma(nd + 1.0) - std::lgamma(k + 1.0) - std::lgamma(nd - k + 1.0) + k * std::log(p) +
           (nd - k) * std::log(q);
  };
  // Walk m, m+1, m-1, m+2, ... with pmf recurrences until the mass passes u.
  const double pm = std::exp(log_pmf(static_cast<double>(m)));
  double acc = pm;
  if (u < acc) return m;
  double up = pm;
  double down = pm;
  std::uint64_t hi = m;
  std::uint64_t lo = m;
  while (hi < n || lo > 0) {
    if (hi < n) {
      up *= (nd - static_cast<double>(hi)) / static_cast<double>(hi + 1) * (p / q);
      ++hi;
      acc += up;
      if (u < acc) return hi;
    }
    if (lo > 0) {
      down *= static_cast<double>(lo) / (nd - static_cast<double>(lo) + 1.0) * (q / p);
      --lo;
      acc += down;
      if (u < acc) return lo;
    }
    if (up < 1e-300 && down < 1e-300) break;
  }
  return m;  // u beyond the accumulated mass by rounding only
}

}  // namespace rng

namespace {

// Stream identifiers keep unrelated draws independent.
constexpr std::uint64_t kStreamClosed = 1;
constexpr std::uint64_t kStreamOutcome = 2;
constexpr std::uint64_t kStreamJitter = 3;
constexpr std::uint64_t kStreamBootstrap = 4;

ComplexMat2 depolarize(const ComplexMat2& rho, double eps) {
  return (1.0 - eps) * rho + eps * 0.5 * ComplexMat2::Identity();
}

WavePlateTriple jittered(const WavePlateTriple& w, const std::array<double, 3>& d) {
  return {w.quarter_first() + d[0], w.half() + d[1], w.quarter_second() + d[2]};
}

// Outcome probabilities per closed restaurant; columns 0..2 restaurants and
// column 3 the dump.
Eigen::Matrix<double, 3, 4> outcome_table(const Strategy& strategy, const NoiseModel& noise, std::uint64_t seed) {
  const double sigma = noise.angle_jitter_deg;
  std::uint64_t draw = 0;
  const auto offsets = [&] {
    std::array<double, 3> d{};
    for (double& x : d) x = sigma > 0.0 ? sigma * rng::normal(seed, kStreamJitter, draw++) : 0.0;
    return d;
  };

  std::array<ComplexMat2, 3> effects;
  ComplexMat2 dump = ComplexMat2::Zero();
  std::array<PureState, 3> states;
  if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) {
    for (int y = 0; y < 3; ++y) effects[y] = q->effect(y);
    states = q->encodings;
  } else {
    const auto& o = std::get<OpticalStrategy>(strategy);
    PolarimeterConfig cfg = o.config;
    cfg.u2 = jittered(cfg.u2, offsets());
    cfg.u3 = jittered(cfg.u3, offsets());
    cfg.u4 = jittered(cfg.u4, offsets());
    const OpticalEffects e = forward_detector_effects(cfg);
    for (int d = 0; d < 3; ++d) effects[cfg.routing[d]] = e.detector[d];
    dump = e.dump;
    states = o.encodings;
  }
  // Each encoding is prepared by a wave-plate triple on |H>; jitter acts there.
  for (int x = 0; x < 3; ++x) {
    if (sigma > 0.0) {
      const WavePlateTriple prep = unitary_to_waveplates(unitary_from_zero(states[x]));
      states[x] = apply_unitary(waveplates_to_unitary(jittered(prep, offsets())), PureState());
    }
  }

  Eigen::Matrix<double, 3, 4> t;
  for (int x = 0; x < 3; ++x) {
    const ComplexMat2 rho = depolarize(projector(states[x]), noise.depolarizing);
    for (int y = 0; y < 3; ++y) t(x, y) = std::max(0.0, (effects[y] * rho).trace().real());
    t(x, 3) = std::max(0.0, (dump * rho).trace().real());
  }
  return t;
}

double prior_renormalized_eps(const Eigen::Matrix3d& v, const std::array<bool, 3>& sampled, const GameSpec& spec,
                              Prob3* p_hat) {
  double wsum = 0.0;
  for (int x = 0; x < 3; ++x)
    if (sampled[x]) wsum += spec.prior[x];
  Prob3 p{};
  double diag = 0.0;
  for (int x = 0; x < 3; ++x) {
    if (!sampled[x]) continue;
    diag += v(x, x);
    for (int y = 0; y < 3; ++y) p[y] += v(x, y) * spec.prior[x] / wsum;
  }
  double eps = spec.k1 * diag;
  for (int y = 0; y < 3; ++y) eps = std::max(eps, spec.k2 * std::abs(spec.gamma[y] - p[y]));
  if (p_hat) *p_hat = p;
  return eps;
}

}  // namespace

void NoiseModel::validate() const {
  if (!std::isfinite(depolarizing) || depolarizing < 0.0 || depolarizing > 1.0) {
    throw Error(ErrorKind::InvalidInput, "depolarizing strength must lie in [0, 1]");
  }
  if (!std::isfinite(angle_jitter_deg) || angle_jitter_deg < 0.0) {
    throw Error(ErrorKind::InvalidInput, "angle jitter must be non-negative");
  }
}

void ExperimentConfig::validate() const {
  if (shots < 1) throw Error(ErrorKind::InvalidInput, "shots must be at least 1");
  if (!is_probability(prior, 1e-12)) throw Error(ErrorKind::InvalidInput, "closure prior must be a probability vector");
  if (bootstrap_resamples < 0) throw Error(ErrorKind::InvalidInput, "bootstrap resamples must be non-negative");
}

OpticalStrategy OpticalStrategy::compile_from(const QuantumStrategy& s) {
  return {compile(Rank1Povm::from_strategy(s)), s.encodings};
}

CountStatistics count_statistics(const Counts& counts, const GameSpec& spec) {
  CountStatistics st;
  std::array<bool, 3> sampled{};
  for (int x = 0; x < 3; ++x) {
    const double n = static_cast<double>(counts[x][0] + counts[x][1] + counts[x][2]);
    sampled[x] = n > 0.0;
    if (sampled[x])
      for (int y = 0; y < 3; ++y) st.visit_estimate(x, y) = static_cast<double>(counts[x][y]) / n;
  }
  st.eps = prior_renormalized_eps(st.visit_estimate, sampled, spec, &st.p_hat);
  return st;
}

double bootstrap_stderr(const Counts& counts, const GameSpec& spec, int resamples, std::uint64_t seed) {
  if (resamples < 2) return 0.0;
  const CountStatistics base = count_statistics(counts, spec);
  std::array<std::uint64_t, 3> n{};
  std::array<bool, 3> sampled{};
  for (int x = 0; x < 3; ++x) {
    n[x] = counts[x][0] + counts[x][1] + counts[x][2];
    sampled[x] = n[x] > 0;
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int b = 0; b < resamples; ++b) {
    Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
    for (int x = 0; x < 3; ++x) {
      if (!sampled[x]) continue;
      const std::uint64_t base_counter = (static_cast<std::uint64_t>(b) * 3 + x) * 2;
      const double p0 = base.visit_estimate(x, 0);
      const double p1 = base.visit_estimate(x, 1);
      const std::uint64_t k0 = rng::binomial(n[x], p0, rng::uniform(seed, kStreamBootstrap, base_counter));
      const double cond = p0 < 1.0 ? std::clamp(p1 / (1.0 - p0), 0.0, 1.0) : 0.0;
      const std::uint64_t k1 = rng::binomial(n[x] - k0, cond, rng::uniform(seed, kStreamBootstrap, base_counter + 1));
      const double nx = static_cast<double>(n[x]);
      v(x, 0) = static_cast<double>(k0) / nx;
      v(x, 1) = static_cast<double>(k1) / nx;
      v(x, 2) = static_cast<double>(n[x] - k0 - k1) / nx;
    }
    const double e = prior_renormalized_eps(v, sampled, spec, nullptr);
    sum += e;
    sum_sq += e * e;
  }
  const double r = static_cast<double>(resamples);
  const double mean = sum / r;
  return std::sqrt(std::max(0.0, (sum_sq - r * mean * mean) / (r - 1.0)));
}

ExperimentResult simulate(const GameSpec& spec, const Strategy& strategy, const NoiseModel& noise,
                          const ExperimentConfig& cfg) {
  spec.validate();
  noise.validate();
  cfg.validate();
  if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) q->validate();

  const Eigen::Matrix<double, 3, 4> table = outcome_table(strategy, noise, cfg.seed);
  // Photons in the dump are never detected; the remaining outcomes are
  // renormalized per closed restaurant.
  Eigen::Matrix3d cdf;
  ExperimentResult res;
  for (int x = 0; x < 3; ++x) {
    const double detected = table(x, 0) + table(x, 1) + table(x, 2);
    if (!(detected > 0.0)) throw Error(ErrorKind::InvalidInput, "a closed restaurant yields no detections");
    res.dump_fraction[x] = table(x, 3) / (detected + table(x, 3));
    double acc = 0.0;
    for (int y = 0; y < 3; ++y) cdf(x, y) = (acc += table(x, y) / detected);
  }
  const std::array<double, 2> prior_cdf = {cfg.prior[0], cfg.prior[0] + cfg.prior[1]};

  for (std::uint64_t shot = 0; shot < cfg.shots; ++shot) {
    const double u = rng::uniform(cfg.seed, kStreamClosed, shot);
    const int x = u < prior_cdf[0] ? 0 : (u < prior_cdf[1] ? 1 : 2);
    const double v = rng::uniform(cfg.seed, kStreamOutcome, shot);
    const int y = v < cdf(x, 0) ? 0 : (v < cdf(x, 1) ? 1 : 2);
    ++res.counts[x][y];
  }

  GameSpec effective = spec;
  effective.prior = cfg.prior;
  const CountStatistics st = count_statistics(res.counts, effective);
  res.visit_estimate = st.visit_estimate;
  res.p_hat = st.p_hat;
  res.eps_q = st.eps;
  res.overlap_f = statistical_overlap(spec.gamma, st.p_hat);
  res.eps_q_stderr = bootstrap_stderr(res.counts, effective, cfg.bootstrap_resamples, cfg.seed);
  res.seed = cfg.seed;
  res.shots = cfg.shots;
  res.noise = noise;
  res.bootstrap_resamples = cfg.bootstrap_resamples;
  return res;
}

VisitMatrix expected_visit_matrix(const Strategy& strategy, const NoiseModel& noise) {
  noise.validate();
  if (noise.angle_jitter_deg != 0.0) {
    throw Error(ErrorKind::InvalidInput, "the expected visit matrix is defined without angle jitter");
  }
  if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) q->validate();
  const Eigen::Matrix<double, 3, 4> t = outcome_table(strategy, noise, 0);
  Eigen::Matrix3d m = t.leftCols<3>();
  for (int x = 0; x < 3; ++x) m.row(x) /= m.row(x).sum();
  return VisitMatrix(m);
}

double quality_under_depolarizing(const Strategy& strategy, const GameSpec& spec, double eps) {
  NoiseModel n;
  n.depolarizing = eps;
  return quality_index(expected_visit_matrix(strategy, n), spec);
}

double advantage_threshold(const GameSpec& spec, const Strategy& strategy, double eps_c) {
  if (!std::isfinite(eps_c) || eps_c <= 0.0) {
    throw Error(ErrorKind::NoAdvantage, "the classical optimum is already zero; no quantum advantage to protect");
  }
  const auto e = [&](double eps) { return quality_under_depolarizing(strategy, spec, eps); };
  if (!(e(0.0) < eps_c)) throw Error(ErrorKind::NoAdvantage, "the noiseless strategy does not beat the classical optimum");
  if (e(1.0) < eps_c) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (e(mid) < eps_c ? lo : hi) = mid;
  }
  return lo;
}

double depolarizing_slope(const QuantumStrategy& s, const GameSpec& spec) {
  double dev = 0.0;
  for (int y = 0; y < 3; ++y) dev = std::max(dev, std::abs(s.weights[y] / 2.0 - spec.gamma[y]));
  return std::max(spec.k1, spec.k2 * dev);
}

void write_counts_csv(std::ostream& os, const Counts& counts) {
  os << "closed,visited,count\n";
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) os << x + 1 << ',' << y + 1 << ',' << counts[x][y] << '\n';
}

Counts read_counts_csv(std::istream& is) {
  Counts c{};
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::InvalidInput, "counts CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "closed,visited,count") throw Error(ErrorKind::InvalidInput, "counts CSV header must be closed,visited,count");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long x = 0;
    long long y = 0;
    long long n = 0;
    char c1 = 0;
    char c2 = 0;
    if (!(ls >> x >> c1 >> y >> c2 >> n) || c1 != ',' || c2 != ',' || !(ls >> std::ws).eof()) {
      throw Error(ErrorKind::InvalidInput, "malformed counts CSV line " + std::to_string(lineno));
    }
    if (x < 1 || x > 3 || y < 1 || y > 3 || n < 0) {
      throw Error(ErrorKind::InvalidInput, "counts CSV line " + std::to_string(lineno) + " out of range");
    }
    c[x - 1][y - 1] += static_cast<std::uint64_t>(n);
  }
  return c;
}

}  // namespace restaurant
