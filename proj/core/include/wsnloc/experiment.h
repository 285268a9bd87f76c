#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsnloc/config.h"
#include "wsnloc/domds.h"
#include "wsnloc/mds.h"
#include "wsnloc/scenario.h"

namespace wsnloc {

struct CheckpointRow {
  int replica = 0;
  std::uint64_t tick = 0;
  std::uint64_t broadcasts = 0;
  double rmse_m = 0.0;
  double wall_ms = 0.0;
};

// Everything one replica produces.
struct RunRecord {
  int replica = 0;
  std::vector<CheckpointRow> rows;  // strictly increasing ticks
  Matrix final_positions;
  CommStats stats;
};

// 0, first, 2 first, 4 first, ... and always `iterations` itself.
std::vector<std::uint64_t> checkpoint_ticks(std::uint64_t iterations, std::uint64_t first);

// Scenario for a config: generated from the master seed so every replica shares it.
Scenario build_scenario(const ExperimentConfig& config);

// Runs every replica (seeds derived from config.seed) and returns records in
// replica order. Degenerate geometry from batch MDS is rethrown with scenario
// context.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Scenario& scenario);
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// One replica, exposed for tests.
RunRecord run_replica(const ExperimentConfig& config, const Scenario& scenario, int replica);

// Mean RMSE per checkpoint across replicas (all replicas share the tick grid).
std::vector<CheckpointRow> mean_curve(const std::vector<RunRecord>& records);

// run.csv:           replica,tick,broadcasts,rmse_m,wall_ms
// run_mean.csv:      tick,broadcasts,rmse_m
// positions_final.csv (replica 0): node,x_m,y_m[,z_m]
void write_run_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<CheckpointRow> read_run_csv(const std::string& path);
void emit_csv(const std::vector<RunRecord>& records, const std::string& out_dir);

}  // namespace wsnloc
