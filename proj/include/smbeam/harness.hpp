// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo driver: average output SINR and cumulative update fraction
// versus snapshot index over K independent runs. Deterministic for a given
// master seed at any thread count.

#ifndef SMBEAM_HARNESS_HPP
#define SMBEAM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "smbeam/array_model.hpp"
#include "smbeam/beamformers.hpp"
#include "smbeam/bounds.hpp"
#include "smbeam/types.hpp"

namespace smbeam {

// Experiment-level scenario in dB terms; materialized into a ScenarioConfig
// (per-source powers, DOAs, phases) once per run.
struct ScenarioSpec {
  int m = 64;
  int q = 25; // desired source + (q - 1) interferers
  double snr_db = 10.0;
  double inr_db = 30.0;
  double theta0_deg = 90.0;
  double guard_deg = 5.0;
  enum class DoaLayout { Even, Random };
  DoaLayout layout = DoaLayout::Even;
  // unit_desired: p0 = 1, sigma_n^2 = 10^(-SNR/10); unit_noise: sigma_n^2 = 1,
  // p0 = 10^(SNR/10). Same SINR either way, different absolute output scale.
  enum class PowerNorm { UnitDesired, UnitNoise };
  PowerNorm power_norm = PowerNorm::UnitDesired;
  double spacing_ratio = 0.5;
  double gamma = 1.0;

  void validate() const;
  double desired_power() const;
  double interferer_power() const;
  double noise_power() const;
  // DOAs and phases drawn from `rng` when randomized; deterministic otherwise.
  ScenarioConfig materialize(RandomStream& rng) const;
};

struct AlgoSpec {
  enum class Kind { FrSg, FrSmSg, JioSg, JioSmSg, Oracle };
  Kind kind = Kind::JioSmSg;
  std::string label; // CSV/plot name, unique within an experiment
  int rank = 5;
  double mu = 1e-6;   // fr-sg step
  double mu_T = 0.05; // jio-sg steps
  double mu_w = 0.05;
  BoundConfig bound;  // gated variants
  JioOptions jio;
};

AlgoSpec default_algo_spec(AlgoSpec::Kind kind);
// Maps "jio-sm-sg", "jio-sg", "fr-sg", "fr-sm-sg", "oracle"; throws
// std::invalid_argument otherwise.
AlgoSpec::Kind algo_kind_from_name(const std::string& name);

struct ExperimentConfig {
  ScenarioSpec scenario;
  std::vector<AlgoSpec> algorithms;
  int snapshots = 1000;
  int runs = 100;
  std::uint64_t master_seed = 20240915;
  int threads = 1;

  void validate() const; // also rejects duplicate labels
};

// Interference-plus-noise context for scoring a weight vector:
//   SINR(w) = p0 |w^H a0|^2 / (w^H R_in w).
struct SinrContext {
  CVector a0;
  double desired_power = 1.0;
  CMatrix r_in; // true interference-plus-noise covariance
};

SinrContext make_sinr_context(const ScenarioConfig& config);
double output_sinr_linear(const CVector& w, const SinrContext& context);
// 10 log10(x) clamped to [-100, inf); non-finite or non-positive x maps to -100.
double sinr_db_floor(double linear);

struct SinrCurve {
  std::string algorithm;
  std::vector<double> mean_sinr_db;        // index i <-> snapshot i+1
  std::vector<double> cum_update_fraction; // updates through i+1, averaged over runs
};

struct AlgoSummary {
  std::string algorithm;
  double final_sinr_db = 0.0;
  double final_update_fraction = 0.0;
};

struct ExperimentResult {
  std::vector<SinrCurve> curves; // algorithm order as configured
  std::vector<AlgoSummary> summary;
  // Order-independent digest of every per-run trajectory, for checking that
  // thread scheduling cannot leak into results.
  std::uint64_t stream_checksum = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace smbeam

#endif
