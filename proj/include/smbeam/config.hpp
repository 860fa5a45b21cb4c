// SPDX-License-Identifier: Apache-2.0
//
// Flat "section.key = value" configuration for the bench tool. Every knob
// has a default matching the reference scenario, so an empty file is valid.

#ifndef SMBEAM_CONFIG_HPP
#define SMBEAM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "smbeam/harness.hpp"

namespace smbeam {

struct BenchSettings {
  ScenarioSpec scenario;

  std::vector<std::string> algo_names = {"jio-sm-sg", "jio-sg", "fr-sg",
                                         "fr-sm-sg", "oracle"};
  int rank = 5;
  double mu_fr = 1e-6;
  double mu_T = 0.05;
  double mu_w = 0.05;
  JioOptions jio;
  BoundConfig bound;

  int snapshots = 1000;
  int runs = 100;
  std::uint64_t seed = 20240915;
  int threads = 1;

  std::string csv_path;  // empty: skip
  std::string plot_path; // empty: skip
};

// Applies one "key = value" assignment. Unknown keys and unparsable values
// throw std::invalid_argument naming the key.
void apply_setting(BenchSettings& settings, const std::string& key,
                   const std::string& value);

// Whole-file loader: blank lines and '#' comments ignored, everything else
// must be "key = value". Throws std::runtime_error with the line number on
// malformed input, std::invalid_argument via apply_setting on bad keys.
void load_settings_file(BenchSettings& settings, const std::string& path);
void apply_settings_text(BenchSettings& settings, const std::string& text);

// Expands algo_names plus the shared knobs into per-algorithm specs and
// validates the whole experiment.
ExperimentConfig build_experiment(const BenchSettings& settings);

// Bound study: the gated full-rank filter once per fixed delta (labels
// "fr-sm-sg-fixed-<delta>") plus one run of the adaptive bound
// ("fr-sm-sg-pdb"). Scenario and run sizes are taken from `settings`.
ExperimentConfig build_bound_sweep(const BenchSettings& settings,
                                   const std::vector<double>& deltas);

} // namespace smbeam

#endif
