// SPDX-License-Identifier: Apache-2.0

#include "smbeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <set>
#include <stdexcept>
#include <thread>

#include "smbeam/numerics.hpp"

namespace smbeam {

namespace {

constexpr double kSinrFloorDb = -100.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace

void ScenarioSpec::validate() const {
  if (m < 1) throw std::invalid_argument("scenario: m must be at least 1");
  if (q < 1 || q > m) throw std::invalid_argument("scenario: q outside [1, m]");
  if (!(theta0_deg > 20.0 && theta0_deg < 160.0))
    throw std::invalid_argument("scenario: theta0 outside the (20, 160) degree sector");
  if (!(guard_deg > 0.0)) throw std::invalid_argument("scenario: guard must be positive");
  if (!std::isfinite(snr_db) || !std::isfinite(inr_db))
    throw std::invalid_argument("scenario: SNR/INR must be finite");
  if (!(spacing_ratio > 0.0))
    throw std::invalid_argument("scenario: spacing ratio must be positive");
  if (gamma == 0.0) throw std::invalid_argument("scenario: gamma must be nonzero");
}

double ScenarioSpec::desired_power() const {
  return power_norm == PowerNorm::UnitDesired ? 1.0 : db_to_linear(snr_db);
}

double ScenarioSpec::noise_power() const {
  return power_norm == PowerNorm::UnitDesired ? db_to_linear(-snr_db) : 1.0;
}

double ScenarioSpec::interferer_power() const {
  return noise_power() * db_to_linear(inr_db);
}

ScenarioConfig ScenarioSpec::materialize(RandomStream& rng) const {
  validate();
  ScenarioConfig config;
  config.m = m;
  config.doas_deg = layout == DoaLayout::Even
                        ? even_doa_layout(theta0_deg, q, guard_deg)
                        : random_doa_layout(theta0_deg, q, rng, guard_deg);
  config.powers.assign(static_cast<std::size_t>(q), interferer_power());
  config.powers[0] = desired_power();
  config.noise_power = noise_power();
  config.element_spacing_ratio = spacing_ratio;
  config.gamma = gamma;
  config.validate();
  return config;
}

AlgoSpec default_algo_spec(AlgoSpec::Kind kind) {
  AlgoSpec spec;
  spec.kind = kind;
  switch (kind) {
    case AlgoSpec::Kind::FrSg: spec.label = "fr-sg"; break;
    case AlgoSpec::Kind::FrSmSg: spec.label = "fr-sm-sg"; break;
    case AlgoSpec::Kind::JioSg: spec.label = "jio-sg"; break;
    case AlgoSpec::Kind::JioSmSg: spec.label = "jio-sm-sg"; break;
    case AlgoSpec::Kind::Oracle: spec.label = "oracle"; break;
  }
  return spec;
}

AlgoSpec::Kind algo_kind_from_name(const std::string& name) {
  if (name == "fr-sg") return AlgoSpec::Kind::FrSg;
  if (name == "fr-sm-sg") return AlgoSpec::Kind::FrSmSg;
  if (name == "jio-sg") return AlgoSpec::Kind::JioSg;
  if (name == "jio-sm-sg") return AlgoSpec::Kind::JioSmSg;
  if (name == "oracle") return AlgoSpec::Kind::Oracle;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected jio-sm-sg, jio-sg, fr-sg, fr-sm-sg or oracle)");
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (snapshots < 1) throw std::invalid_argument("experiment: snapshots must be >= 1");
  if (runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
  std::set<std::string> labels;
  for (const AlgoSpec& spec : algorithms) {
    if (spec.label.empty()) throw std::invalid_argument("experiment: empty algorithm label");
    if (!labels.insert(spec.label).second)
      throw std::invalid_argument("experiment: duplicate algorithm label '" + spec.label + "'");
    const bool reduced = spec.kind == AlgoSpec::Kind::JioSg ||
                         spec.kind == AlgoSpec::Kind::JioSmSg;
    if (reduced && (spec.rank < 1 || spec.rank > scenario.m))
      throw std::invalid_argument("experiment: rank outside [1, m] for '" + spec.label + "'");
    const bool gated = spec.kind == AlgoSpec::Kind::FrSmSg ||
                       spec.kind == AlgoSpec::Kind::JioSmSg;
    if (gated) BoundPolicy probe(spec.bound, scenario.noise_power());
    if (spec.kind == AlgoSpec::Kind::FrSg && !(spec.mu > 0.0))
      throw std::invalid_argument("experiment: mu must be positive for '" + spec.label + "'");
  }
}

SinrContext make_sinr_context(const ScenarioConfig& config) {
  config.validate();
  if (config.q() < 1)
    throw std::invalid_argument("make_sinr_context: a desired source is required");
  SinrContext context;
  context.a0 = steering_vector(config.doas_deg[0], config.m, config.element_spacing_ratio);
  context.desired_power = config.powers[0];
  context.r_in = true_covariance(config, true);
  return context;
}

double output_sinr_linear(const CVector& w, const SinrContext& context) {
  if (w.size() != context.a0.size())
    throw std::invalid_argument("output_sinr_linear: size mismatch");
  const double num = context.desired_power * std::norm(w.dot(context.a0));
  const double den = (w.dot(context.r_in * w)).real();
  if (!(den > 0.0))
    throw std::runtime_error("output_sinr_linear: nonpositive output power, broken weight");
  return num / den;
}

double sinr_db_floor(double linear) {
  if (!std::isfinite(linear) || linear <= 0.0) return kSinrFloorDb;
  return std::max(kSinrFloorDb, 10.0 * std::log10(linear));
}

namespace {

std::unique_ptr<Beamformer> instantiate(const AlgoSpec& spec, const ScenarioConfig& sc,
                                        const CVector& a0) {
  switch (spec.kind) {
    case AlgoSpec::Kind::FrSg:
      return make_full_rank_sg(spec.label, a0, sc.gamma, spec.mu);
    case AlgoSpec::Kind::FrSmSg:
      return make_full_rank_sm_sg(spec.label, a0, sc.gamma,
                                  BoundPolicy(spec.bound, sc.noise_power));
    case AlgoSpec::Kind::JioSg:
      return make_jio_sg(spec.label, a0, sc.gamma, spec.rank, spec.mu_T, spec.mu_w,
                         spec.jio);
    case AlgoSpec::Kind::JioSmSg:
      return make_jio_sm_sg(spec.label, a0, sc.gamma, spec.rank,
                            BoundPolicy(spec.bound, sc.noise_power), spec.jio);
    case AlgoSpec::Kind::Oracle: {
      const HermitianMatrix R(true_covariance(sc, false));
      return make_fixed_weight(spec.label, lcmv_optimal_weight(R, a0, sc.gamma));
    }
  }
  throw std::logic_error("instantiate: unhandled algorithm kind");
}

// Diverged adaptive weights score zero signal power instead of aborting the
// whole ensemble. The norm ceiling keeps the quadratic form below overflow,
// which would otherwise turn into NaN through inf - inf.
double guarded_sinr(const CVector& w, const SinrContext& context) {
  const double n2 = w.squaredNorm();
  if (!w.allFinite() || n2 == 0.0 || !(n2 < 1e100)) return 0.0;
  return output_sinr_linear(w, context);
}

void fold_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
}

struct RunOutput {
  // [algorithm][snapshot]
  std::vector<std::vector<double>> sinr_linear;
  std::vector<std::vector<double>> update_fraction;
  std::uint64_t digest = 0;
};

RunOutput run_single(const ExperimentConfig& config, int run_index) {
  RandomStream rng(child_seed(config.master_seed, static_cast<std::uint64_t>(run_index)));
  const ScenarioConfig sc = config.scenario.materialize(rng);
  const SnapshotGenerator gen(sc);
  const CVector a0 = steering_vector(sc.doas_deg[0], sc.m, sc.element_spacing_ratio);
  const SinrContext context = make_sinr_context(sc);

  const std::size_t n_algo = config.algorithms.size();
  std::vector<std::unique_ptr<Beamformer>> machines;
  machines.reserve(n_algo);
  for (const AlgoSpec& spec : config.algorithms)
    machines.push_back(instantiate(spec, sc, a0));

  RunOutput out;
  out.sinr_linear.assign(n_algo, std::vector<double>(config.snapshots));
  out.update_fraction.assign(n_algo, std::vector<double>(config.snapshots));
  std::vector<std::int64_t> cumulative(n_algo, 0);
  std::uint64_t digest = 1469598103934665603ULL;

  for (int i = 0; i < config.snapshots; ++i) {
    const Snapshot snap = gen.generate(rng);
    for (Eigen::Index k = 0; k < snap.x.size(); ++k) {
      const double re = snap.x(k).real(), im = snap.x(k).imag();
      fold_bytes(digest, &re, sizeof re);
      fold_bytes(digest, &im, sizeof im);
    }
    const double noise_sample = snap.noise.squaredNorm() / sc.m;
    for (std::size_t a = 0; a < n_algo; ++a) {
      if (noise_sample > 0.0) machines[a]->supply_noise(noise_sample);
      const StepOutcome outcome = machines[a]->step(snap.x);
      if (outcome.updated) ++cumulative[a];
      out.update_fraction[a][i] =
          static_cast<double>(cumulative[a]) / static_cast<double>(i + 1);
      out.sinr_linear[a][i] = guarded_sinr(machines[a]->effective_weight(), context);
    }
  }
  out.digest = digest;
  return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int n_runs = config.runs;
  const std::size_t n_algo = config.algorithms.size();
  const int n = config.snapshots;

  std::vector<RunOutput> per_run(n_runs);
  std::atomic<int> next{0};
  auto worker = [&config, &per_run, &next, n_runs]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= n_runs) return;
      per_run[k] = run_single(config, k);
    }
  };
  const int pool_size = std::min(config.threads, n_runs);
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (int t = 0; t < pool_size; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Reduction runs in ascending run order regardless of who computed what,
  // so the result bytes cannot depend on the thread count.
  ExperimentResult result;
  result.curves.resize(n_algo);
  result.summary.resize(n_algo);
  for (std::size_t a = 0; a < n_algo; ++a) {
    SinrCurve& curve = result.curves[a];
    curve.algorithm = config.algorithms[a].label;
    curve.mean_sinr_db.resize(n);
    curve.cum_update_fraction.resize(n);
    for (int i = 0; i < n; ++i) {
      double sinr_sum = 0.0;
      double frac_sum = 0.0;
      for (int k = 0; k < n_runs; ++k) {
        sinr_sum += per_run[k].sinr_linear[a][i];
        frac_sum += per_run[k].update_fraction[a][i];
      }
      curve.mean_sinr_db[i] = sinr_db_floor(sinr_sum / n_runs);
      curve.cum_update_fraction[i] = frac_sum / n_runs;
    }
    result.summary[a] = {curve.algorithm, curve.mean_sinr_db.back(),
                         curve.cum_update_fraction.back()};
  }
  std::uint64_t checksum = 0;
  for (const RunOutput& r : per_run) checksum ^= r.digest;
  result.stream_checksum = checksum;
  return result;
}

} // namespace smbeam
