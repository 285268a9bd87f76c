#include "wsnloc/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>

#include "wsnloc/channel.h"
#include "wsnloc/csv.h"
#include "wsnloc/domle.h"
#include "wsnloc/error.h"
#include "wsnloc/oja.h"

namespace wsnloc {

std::vector<std::uint64_t> checkpoint_ticks(std::uint64_t iterations, std::uint64_t first) {
  std::vector<std::uint64_t> ticks{0};
  for (std::uint64_t t = first; t < iterations; t *= 2) ticks.push_back(t);
  ticks.push_back(iterations);
  return ticks;
}

Scenario build_scenario(const ExperimentConfig& config) {
  Rng rng = RandomStream(config.seed).substream(0, StreamPurpose::kScenario);
  return generate_scenario(config.scenario, rng);
}

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  Recorder(const ExperimentConfig& config, RunRecord& record)
      : record_(record), timed_(config.record_wall_time), start_(Clock::now()) {}

  void add(std::uint64_t tick, std::uint64_t broadcasts, double rmse) {
    double ms = 0.0;
    if (timed_) ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    record_.rows.push_back({record_.replica, tick, broadcasts, rmse, ms});
  }

 private:
  RunRecord& record_;
  bool timed_;
  Clock::time_point start_;
};

ObservationModel observation_for(const ExperimentConfig& config, const Scenario& scenario) {
  if (config.q_matrix_file.empty()) return ObservationModel::uniform(scenario.size(), config.q_obs);
  ObservationModel obs = config.observation_model();
  if (obs.size() != scenario.size()) throw ConfigError("observation.matrix size does not match N");
  return obs;
}

Matrix run_batch(const ExperimentConfig& config, const Scenario& scenario, const RandomStream& stream,
                 Recorder& rec) {
  // Batch MDS sees every pair once.
  Rng rng = stream.substream(1, StreamPurpose::kObservation);
  const SparseObservation obs = sample_observation(
      scenario, ObservationModel::uniform(scenario.size(), 1.0), config.channel, rng);
  Matrix z;
  try {
    z = batch_mds(obs.s, scenario.dim());
  } catch (const DegenerateGeometryError& e) {
    throw DegenerateGeometryError(std::string(e.what()) + " (scenario N=" +
                                  std::to_string(scenario.size()) + ", seed " +
                                  std::to_string(config.seed) + ")");
  }
  rec.add(1, 0, rmse(z, scenario.positions, Alignment::kProcrustes));
  return z;
}

Matrix run_oja(const ExperimentConfig& config, const Scenario& scenario, const RandomStream& stream,
               Recorder& rec) {
  const ObservationModel obs_model = observation_for(config, scenario);
  const Matrix distances = distance_matrix(scenario.positions);
  Rng init_rng = stream.substream(0, StreamPurpose::kInit);
  OjaState state = oja_init(scenario.size(), scenario.dim(), init_rng);
  const auto checkpoints = checkpoint_ticks(config.iterations, config.first_checkpoint);
  std::size_t next = 0;
  for (std::uint64_t n = 0; n <= config.iterations; ++n) {
    if (n > 0) {
      Rng rng = stream.substream(n, StreamPurpose::kObservation);
      const SparseObservation obs = sample_observation(distances, obs_model, config.channel, rng);
      state = oja_update(state, double_center(obs.s), config.schedule(n), config.box);
    }
    if (next < checkpoints.size() && checkpoints[next] == n) {
      rec.add(n, 0,
              rmse(assemble_positions(state, config.readout), scenario.positions,
                   Alignment::kProcrustes));
      ++next;
    }
  }
  return assemble_positions(state, config.readout);
}

Matrix run_domds(const ExperimentConfig& config, const Scenario& scenario, const RandomStream& stream,
                 Recorder& rec, CommStats& stats) {
  const DomdsEnvironment env(distance_matrix(scenario.positions), observation_for(config, scenario),
                             config.channel, config.ats_q, config.variant, config.box);
  Rng init_rng = stream.substream(0, StreamPurpose::kInit);
  std::vector<NodeState> nodes = domds_init(scenario.size(), scenario.dim(), init_rng);
  const auto checkpoints = checkpoint_ticks(config.iterations, config.first_checkpoint);
  std::size_t next = 0;
  for (std::uint64_t n = 0; n <= config.iterations; ++n) {
    if (n > 0) stats += domds_round(nodes, env, config.schedule(n), n, stream);
    if (next < checkpoints.size() && checkpoints[next] == n) {
      rec.add(n, stats.broadcasts_sent,
              rmse(network_positions(nodes), scenario.positions, Alignment::kProcrustes));
      ++next;
    }
  }
  return network_positions(nodes);
}

Matrix run_domle(const ExperimentConfig& config, const Scenario& scenario, const RandomStream& stream,
                 const Matrix& initial, std::uint64_t tick_offset, Recorder& rec, CommStats& stats) {
  const LocalizationGraph graph =
      LocalizationGraph::within_radius(scenario.positions, scenario.anchors, config.domle_radius);
  if (!graph.connected()) {
    throw ConfigError("doMLE: graph with radius " + format_number(config.domle_radius) +
                      " m is not connected");
  }
  const DomleEnvironment env{graph, scenario.positions, distance_matrix(scenario.positions),
                             config.channel};
  const Alignment align = scenario.anchors.empty() ? Alignment::kProcrustes : Alignment::kNone;

  std::vector<LocalMap> maps = make_local_maps(graph, initial);
  const auto checkpoints = checkpoint_ticks(config.domle_iterations, config.first_checkpoint);
  std::size_t next = 0;
  for (std::uint64_t n = 0; n <= config.domle_iterations; ++n) {
    if (n > 0) {
      domle_round(maps, env, config.domle_schedule(n), tick_offset + n, stream);
      stats.broadcasts_sent += 2;  // the gossip pair exchanges one message each way
      stats.messages_delivered += 2;
      stats.ticks += 1;
    }
    if (next < checkpoints.size() && checkpoints[next] == n) {
      // The doMDS hand-off point is already recorded by the caller.
      if (!(n == 0 && tick_offset > 0)) {
        rec.add(tick_offset + n, stats.broadcasts_sent,
                rmse(owner_positions(maps, env), scenario.positions, align));
      }
      ++next;
    }
  }
  return owner_positions(maps, env);
}

// Random positions in the area for unknowns, truth for anchors.
Matrix random_initial_positions(const Scenario& scenario, const RandomStream& stream) {
  Rng rng = stream.substream(1, StreamPurpose::kInit);
  const double extent[3] = {scenario.area.width, scenario.area.height, scenario.area.depth};
  Matrix z(scenario.size(), scenario.dim());
  for (int i = 0; i < scenario.size(); ++i) {
    for (int k = 0; k < scenario.dim(); ++k) z(i, k) = uniform(rng, 0.0, extent[k]);
  }
  for (int a : scenario.anchors) z.row(a) = scenario.positions.row(a);
  return z;
}

}  // namespace

RunRecord run_replica(const ExperimentConfig& config, const Scenario& scenario, int replica) {
  RunRecord record;
  record.replica = replica;
  const RandomStream stream = RandomStream::for_replica(config.seed, static_cast<std::uint64_t>(replica));
  Recorder rec(config, record);

  switch (config.algorithm) {
    case Algorithm::kBatchMds:
      record.final_positions = run_batch(config, scenario, stream, rec);
      break;
    case Algorithm::kOja:
      record.final_positions = run_oja(config, scenario, stream, rec);
      break;
    case Algorithm::kDomds:
      record.final_positions = run_domds(config, scenario, stream, rec, record.stats);
      break;
    case Algorithm::kDomle:
      record.final_positions = run_domle(config, scenario, stream,
                                         random_initial_positions(scenario, stream), 0, rec,
                                         record.stats);
      break;
    case Algorithm::kDomdsDomle: {
      const Matrix coarse = run_domds(config, scenario, stream, rec, record.stats);
      // doMLE works in absolute coordinates: anchor-align the relative doMDS map.
      Matrix initial = coarse;
      if (!scenario.anchors.empty()) {
        initial = procrustes_align(coarse, scenario.positions, scenario.anchors).aligned;
        for (int a : scenario.anchors) initial.row(a) = scenario.positions.row(a);
      }
      record.final_positions =
          run_domle(config, scenario, stream, initial, config.iterations, rec, record.stats);
      break;
    }
  }
  return record;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, build_scenario(config));
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Scenario& scenario) {
  config.validate();
  scenario.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(config.replicas));

  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, config.replicas);
  if (workers <= 1) {
    for (int r = 0; r < config.replicas; ++r) records[static_cast<std::size_t>(r)] = run_replica(config, scenario, r);
    return records;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < config.replicas; r = next++) {
          try {
            records[static_cast<std::size_t>(r)] = run_replica(config, scenario, r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<CheckpointRow> mean_curve(const std::vector<RunRecord>& records) {
  std::vector<CheckpointRow> mean;
  if (records.empty()) return mean;
  mean = records.front().rows;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    double rmse_sum = 0.0;
    double bcast_sum = 0.0;
    for (const auto& rec : records) {
      if (rec.rows.size() != mean.size() || rec.rows[k].tick != mean[k].tick) {
        throw Error("mean_curve: replicas do not share a checkpoint grid");
      }
      rmse_sum += rec.rows[k].rmse_m;
      bcast_sum += static_cast<double>(rec.rows[k].broadcasts);
    }
    mean[k].replica = -1;
    mean[k].rmse_m = rmse_sum / static_cast<double>(records.size());
    mean[k].broadcasts = static_cast<std::uint64_t>(bcast_sum / static_cast<double>(records.size()) + 0.5);
    mean[k].wall_ms = 0.0;
  }
  return mean;
}

void write_run_csv(const std::vector<RunRecord>& records, const std::string& path) {
  CsvTable table;
  table.header = {"replica", "tick", "broadcasts", "rmse_m", "wall_ms"};
  for (const auto& rec : records) {
    for (const auto& row : rec.rows) {
      table.rows.push_back({std::to_string(row.replica), std::to_string(row.tick),
                            std::to_string(row.broadcasts), format_number(row.rmse_m),
                            format_number(row.wall_ms)});
    }
  }
  write_csv(table, path);
}

std::vector<CheckpointRow> read_run_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  const auto c_rep = table.column("replica");
  const auto c_tick = table.column("tick");
  const auto c_b = table.column("broadcasts");
  const auto c_rmse = table.column("rmse_m");
  const auto c_wall = table.column("wall_ms");
  std::vector<CheckpointRow> rows;
  for (const auto& r : table.rows) {
    rows.push_back({std::stoi(r[c_rep]), std::stoull(r[c_tick]), std::stoull(r[c_b]),
                    std::stod(r[c_rmse]), std::stod(r[c_wall])});
  }
  return rows;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
  const std::filesystem::path dir(out_dir);
  write_run_csv(records, (dir / "run.csv").string());

  CsvTable mean;
  mean.header = {"tick", "broadcasts", "rmse_m"};
  for (const auto& row : mean_curve(records)) {
    mean.rows.push_back({std::to_string(row.tick), std::to_string(row.broadcasts),
                         format_number(row.rmse_m)});
  }
  write_csv(mean, (dir / "run_mean.csv").string());
  if (!records.empty()) {
    write_positions_csv(records.front().final_positions, (dir / "positions_final.csv").string());
  }
}

}  // namespace wsnloc
