// wsnloc: scenario generation, experiment runs, and RMSE evaluation.
//
//   wsnloc gen     --config exp.cfg --out dir        writes dir/scenario.csv
//   wsnloc run     --config exp.cfg --out dir        writes run.csv, run_mean.csv, positions_final.csv
//   wsnloc eval    --estimate a.csv --truth b.csv --align procrustes
//   wsnloc inspect --config exp.cfg
//
// Exit codes: 0 success, 2 configuration error, 3 degenerate geometry, 4 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsnloc/config.h"
#include "wsnloc/csv.h"
#include "wsnloc/error.h"
#include "wsnloc/experiment.h"
#include "wsnloc/mds.h"
#include "wsnloc/scenario.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::optional<int> replicas;
  std::vector<std::string> settings;
};

wsnloc::ExperimentConfig resolve(const CommonOptions& opts) {
  wsnloc::ExperimentConfig config =
      opts.config_path.empty() ? wsnloc::ExperimentConfig{} : wsnloc::load_config(opts.config_path);
  for (const auto& s : opts.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw wsnloc::ConfigError("--set expects key=value, got '" + s + "'");
    wsnloc::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (opts.seed) config.seed = *opts.seed;
  if (opts.algorithm) config.algorithm = wsnloc::parse_algorithm(*opts.algorithm);
  if (opts.replicas) config.replicas = *opts.replicas;
  config.validate();
  if (config.schedule.beta == 0.5) {
    std::cerr << "warning: schedule.beta = 0.5 leaves sum gamma^2 divergent; "
                 "convergence is not guaranteed\n";
  }
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config (key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Master seed (overrides run.seed)");
  cmd->add_option("--set", opts.settings, "Extra key=value overrides, applied after --config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed on-line MDS localization simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string out_dir = ".";

  auto* gen = app.add_subcommand("gen", "Write the scenario CSV for a config");
  add_common(gen, opts);
  gen->add_option("--out", out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Execute a config and write RunRecord CSVs");
  add_common(run, opts);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--algorithm", opts.algorithm, "batch-mds|oja|domds|domle|domds+domle");
  run->add_option("--replicas", opts.replicas, "Number of Monte Carlo replicas")
      ->check(CLI::PositiveNumber);

  std::string estimate_path, truth_path, align_name = "procrustes";
  auto* eval = app.add_subcommand("eval", "RMSE between two position CSVs");
  eval->add_option("--estimate", estimate_path, "node,x_m,y_m[,z_m] CSV")->required();
  eval->add_option("--truth", truth_path, "Scenario or positions CSV")->required();
  eval->add_option("--align", align_name, "none|procrustes|anchor");

  auto* inspect = app.add_subcommand("inspect", "Print the resolved config and derived constants");
  add_common(inspect, opts);
  inspect->add_option("--algorithm", opts.algorithm, "batch-mds|oja|domds|domle|domds+domle");
  inspect->add_option("--replicas", opts.replicas, "Number of Monte Carlo replicas");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen) {
      const auto config = resolve(opts);
      const auto scenario = wsnloc::build_scenario(config);
      std::filesystem::create_directories(out_dir);
      const auto path = (std::filesystem::path(out_dir) / "scenario.csv").string();
      wsnloc::write_scenario_csv(scenario, path);
      std::cout << "wrote " << path << " (" << scenario.size() << " nodes, "
                << scenario.anchors.size() << " anchors)\n";
    } else if (*run) {
      const auto config = resolve(opts);
      const auto scenario = wsnloc::build_scenario(config);
      const auto records = wsnloc::run_experiment(config, scenario);
      wsnloc::emit_csv(records, out_dir);
      wsnloc::write_scenario_csv(scenario, (std::filesystem::path(out_dir) / "scenario.csv").string());
      const auto mean = wsnloc::mean_curve(records);
      std::cout << wsnloc::to_string(config.algorithm) << ": " << records.size()
                << " replica(s), final mean RMSE " << wsnloc::format_number(mean.back().rmse_m)
                << " m (initial " << wsnloc::format_number(mean.front().rmse_m) << " m); output in "
                << out_dir << '\n';
    } else if (*eval) {
      const auto align = wsnloc::parse_alignment(align_name);
      const wsnloc::Matrix est = wsnloc::read_positions_csv(estimate_path);
      const wsnloc::Scenario truth = wsnloc::read_scenario_csv(truth_path);
      if (est.rows() != truth.positions.rows() || est.cols() != truth.positions.cols()) {
        throw wsnloc::ConfigError("estimate and truth have different shapes");
      }
      std::cout << wsnloc::format_number(wsnloc::rmse(est, truth.positions, align, truth.anchors)) << '\n';
    } else if (*inspect) {
      std::cout << wsnloc::describe(resolve(opts));
    }
  } catch (const wsnloc::DegenerateGeometryError& e) {
    std::cerr << "degenerate geometry: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const wsnloc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const wsnloc::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
