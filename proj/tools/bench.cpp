// SPDX-License-Identifier: Apache-2.0
//
// bench: Monte Carlo benchmark CLI for the adaptive beamformers.
//
//   bench run [--config file] [--algo a,b,...] [--runs K] [--snapshots N]
//             [--seed S] [--rank r] [--threads T] [--csv path] [--plot path]
//   bench sweep-bound --deltas 0.7,1.0,1.5 [common flags]
//
// Precedence: built-in defaults, then the config file, then flags.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smbeam/config.hpp"
#include "smbeam/harness.hpp"
#include "smbeam/report.hpp"

namespace {

void print_summary(const smbeam::ExperimentResult& result) {
  std::printf("%-22s %14s %16s\n", "algorithm", "final SINR dB", "update fraction");
  for (const smbeam::AlgoSummary& row : result.summary)
    std::printf("%-22s %14.3f %16.4f\n", row.algorithm.c_str(), row.final_sinr_db,
                row.final_update_fraction);
}

void emit_outputs(const smbeam::ExperimentResult& result,
                  const smbeam::BenchSettings& settings) {
  if (!settings.csv_path.empty()) {
    smbeam::write_csv(result.curves, settings.csv_path);
    std::printf("wrote %s\n", settings.csv_path.c_str());
  }
  if (!settings.plot_path.empty()) {
    smbeam::write_plot_svg(result.curves, settings.plot_path);
    std::printf("wrote %s\n", settings.plot_path.c_str());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"set-membership reduced-rank LCMV beamformer benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string algo_list;
  int runs = 0, snapshots = 0, rank = 0, threads = 0;
  std::uint64_t seed = 0;
  std::string csv_path, plot_path;
  std::vector<double> deltas{0.7, 1.0, 1.5};

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (key = value lines)");
    cmd->add_option("--runs", runs, "Monte Carlo runs K");
    cmd->add_option("--snapshots", snapshots, "snapshots per run N");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--rank", rank, "reduced rank r");
    cmd->add_option("--threads", threads, "worker thread count");
    cmd->add_option("--csv", csv_path, "write the curves to this CSV file");
    cmd->add_option("--plot", plot_path, "write an SVG chart to this file");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run the configured experiment");
  add_common(cmd_run);
  cmd_run->add_option("--algo", algo_list,
                      "comma-separated subset of jio-sm-sg,jio-sg,fr-sg,fr-sm-sg,oracle");

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep-bound", "gated full-rank filter across fixed bounds "
                                        "plus the adaptive bound");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--deltas", deltas, "fixed bound values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    smbeam::BenchSettings settings;
    if (active->count("--config")) smbeam::load_settings_file(settings, config_path);
    if (active == cmd_run && cmd_run->count("--algo"))
      smbeam::apply_setting(settings, "algo.list", algo_list);
    if (active->count("--runs")) settings.runs = runs;
    if (active->count("--snapshots")) settings.snapshots = snapshots;
    if (active->count("--seed")) settings.seed = seed;
    if (active->count("--rank")) settings.rank = rank;
    if (active->count("--threads")) settings.threads = threads;
    if (active->count("--csv")) settings.csv_path = csv_path;
    if (active->count("--plot")) settings.plot_path = plot_path;

    const smbeam::ExperimentConfig config = active == cmd_run
                                                ? smbeam::build_experiment(settings)
                                                : smbeam::build_bound_sweep(settings, deltas);
    const smbeam::ExperimentResult result = smbeam::run_experiment(config);
    print_summary(result);
    emit_outputs(result, settings);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
