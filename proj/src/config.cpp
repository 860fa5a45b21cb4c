// SPDX-License-Identifier: Apache-2.0

#include "smbeam/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smbeam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const char* domain,
                            const std::string& value) {
  throw std::invalid_argument("config key " + key + ": expected " + domain +
                              ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  double out{};
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, out);
  if (value.empty() || res.ec != std::errc{} || res.ptr != last)
    bad_value(key, "a number", value);
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out{};
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, out);
  if (value.empty() || res.ec != std::errc{} || res.ptr != last)
    bad_value(key, "an integer", value);
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out{};
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, out);
  if (value.empty() || res.ec != std::errc{} || res.ptr != last)
    bad_value(key, "an unsigned integer", value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, "true or false", value);
}

int parse_positive_int(const std::string& key, const std::string& value) {
  const long long v = parse_int(key, value);
  if (v < 1 || v > 1'000'000'000) bad_value(key, "a positive integer", value);
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) bad_value(key, "a comma-separated list of names", value);
    out.push_back(item);
  }
  if (out.empty()) bad_value(key, "a comma-separated list of names", value);
  return out;
}

} // namespace

void apply_setting(BenchSettings& s, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "scenario.m") {
    s.scenario.m = parse_positive_int(key, value);
  } else if (key == "scenario.q") {
    s.scenario.q = parse_positive_int(key, value);
  } else if (key == "scenario.snr_db") {
    s.scenario.snr_db = parse_double(key, value);
  } else if (key == "scenario.inr_db") {
    s.scenario.inr_db = parse_double(key, value);
  } else if (key == "scenario.theta0_deg") {
    s.scenario.theta0_deg = parse_double(key, value);
    if (!(s.scenario.theta0_deg > 20.0 && s.scenario.theta0_deg < 160.0))
      bad_value(key, "an angle in (20, 160) degrees", value);
  } else if (key == "scenario.guard_deg") {
    s.scenario.guard_deg = parse_double(key, value);
    if (!(s.scenario.guard_deg > 0.0)) bad_value(key, "a positive angle", value);
  } else if (key == "scenario.doa_layout") {
    if (value == "even") s.scenario.layout = ScenarioSpec::DoaLayout::Even;
    else if (value == "random") s.scenario.layout = ScenarioSpec::DoaLayout::Random;
    else bad_value(key, "even or random", value);
  } else if (key == "scenario.power_norm") {
    if (value == "unit_desired") s.scenario.power_norm = ScenarioSpec::PowerNorm::UnitDesired;
    else if (value == "unit_noise") s.scenario.power_norm = ScenarioSpec::PowerNorm::UnitNoise;
    else bad_value(key, "unit_desired or unit_noise", value);
  } else if (key == "scenario.spacing_ratio") {
    s.scenario.spacing_ratio = parse_double(key, value);
    if (!(s.scenario.spacing_ratio > 0.0)) bad_value(key, "a positive ratio", value);
  } else if (key == "scenario.gamma") {
    s.scenario.gamma = parse_double(key, value);
    if (s.scenario.gamma == 0.0) bad_value(key, "a nonzero constraint value", value);
  } else if (key == "algo.list") {
    std::vector<std::string> names = split_list(key, value);
    for (const std::string& name : names) algo_kind_from_name(name);
    s.algo_names = std::move(names);
  } else if (key == "algo.rank") {
    s.rank = parse_positive_int(key, value);
  } else if (key == "algo.mu_fr") {
    s.mu_fr = parse_double(key, value);
    if (!(s.mu_fr > 0.0)) bad_value(key, "a positive step size", value);
  } else if (key == "algo.mu_t") {
    s.mu_T = parse_double(key, value);
    if (!(s.mu_T > 0.0)) bad_value(key, "a positive step size", value);
  } else if (key == "algo.mu_w") {
    s.mu_w = parse_double(key, value);
    if (!(s.mu_w > 0.0)) bad_value(key, "a positive step size", value);
  } else if (key == "algo.normalized_projection") {
    s.jio.normalized_projection = parse_bool(key, value);
  } else if (key == "algo.reproject_constraint") {
    s.jio.reproject_constraint = parse_bool(key, value);
  } else if (key == "algo.denom_tolerance") {
    s.jio.denom_tolerance = parse_double(key, value);
    if (!(s.jio.denom_tolerance > 0.0)) bad_value(key, "a positive tolerance", value);
  } else if (key == "bound.mode") {
    if (value == "fixed") s.bound.mode = BoundMode::Fixed;
    else if (value == "pdb") s.bound.mode = BoundMode::Pdb;
    else bad_value(key, "fixed or pdb", value);
  } else if (key == "bound.delta_fixed") {
    s.bound.delta_fixed = parse_double(key, value);
    if (!(s.bound.delta_fixed >= 0.0)) bad_value(key, "a nonnegative bound", value);
  } else if (key == "bound.alpha") {
    s.bound.alpha = parse_double(key, value);
    if (!(s.bound.alpha > 1.0)) bad_value(key, "a coefficient greater than 1", value);
  } else if (key == "bound.beta") {
    s.bound.beta = parse_double(key, value);
    if (!(s.bound.beta >= 0.0 && s.bound.beta <= 1.0))
      bad_value(key, "a factor in [0, 1]", value);
  } else if (key == "noise.mode") {
    if (value == "known") s.bound.noise_mode = NoiseMode::Known;
    else if (value == "smoothed") s.bound.noise_mode = NoiseMode::Smoothed;
    else bad_value(key, "known or smoothed", value);
  } else if (key == "noise.rho") {
    s.bound.rho = parse_double(key, value);
    if (!(s.bound.rho >= 0.0 && s.bound.rho <= 1.0))
      bad_value(key, "a factor in [0, 1]", value);
  } else if (key == "run.snapshots") {
    s.snapshots = parse_positive_int(key, value);
  } else if (key == "run.runs") {
    s.runs = parse_positive_int(key, value);
  } else if (key == "run.seed") {
    s.seed = parse_u64(key, value);
  } else if (key == "run.threads") {
    s.threads = parse_positive_int(key, value);
  } else if (key == "output.csv") {
    s.csv_path = value;
  } else if (key == "output.plot") {
    s.plot_path = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

void apply_settings_text(BenchSettings& settings, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": missing key");
    apply_setting(settings, key, line.substr(eq + 1));
  }
}

void load_settings_file(BenchSettings& settings, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    apply_settings_text(settings, text.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ExperimentConfig build_experiment(const BenchSettings& settings) {
  ExperimentConfig config;
  config.scenario = settings.scenario;
  for (const std::string& name : settings.algo_names) {
    AlgoSpec spec = default_algo_spec(algo_kind_from_name(name));
    spec.label = name;
    spec.rank = settings.rank;
    spec.mu = settings.mu_fr;
    spec.mu_T = settings.mu_T;
    spec.mu_w = settings.mu_w;
    spec.bound = settings.bound;
    spec.jio = settings.jio;
    config.algorithms.push_back(std::move(spec));
  }
  config.snapshots = settings.snapshots;
  config.runs = settings.runs;
  config.master_seed = settings.seed;
  config.threads = settings.threads;
  config.validate();
  return config;
}

ExperimentConfig build_bound_sweep(const BenchSettings& settings,
                                   const std::vector<double>& deltas) {
  if (deltas.empty()) throw std::invalid_argument("bound sweep: empty delta list");
  ExperimentConfig config;
  config.scenario = settings.scenario;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw std::invalid_argument("bound sweep: negative delta");
    AlgoSpec spec = default_algo_spec(AlgoSpec::Kind::FrSmSg);
    char label[64];
    std::snprintf(label, sizeof label, "fr-sm-sg-fixed-%g", delta);
    spec.label = label;
    spec.bound = settings.bound;
    spec.bound.mode = BoundMode::Fixed;
    spec.bound.delta_fixed = delta;
    config.algorithms.push_back(std::move(spec));
  }
  AlgoSpec pdb = default_algo_spec(AlgoSpec::Kind::FrSmSg);
  pdb.label = "fr-sm-sg-pdb";
  pdb.bound = settings.bound;
  pdb.bound.mode = BoundMode::Pdb;
  config.algorithms.push_back(std::move(pdb));
  config.snapshots = settings.snapshots;
  config.runs = settings.runs;
  config.master_seed = settings.seed;
  config.threads = settings.threads;
  config.validate();
  return config;
}

} // namespace smbeam
