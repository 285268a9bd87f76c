#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "wsnloc/channel.h"
#include "wsnloc/domds.h"
#include "wsnloc/oja.h"
#include "wsnloc/scenario.h"

namespace wsnloc {

enum class Algorithm { kBatchMds, kOja, kDomds, kDomle, kDomdsDomle };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

// Every experimental knob. Defaults reproduce the 50-node, 5 x 9 m deployment
// with 6 anchors, q_ij = 0.8, q = 0.85 and the simulated-noise ratio
// sigma / eta = 1.7 at eta = 2.44.
struct ExperimentConfig {
  ScenarioSpec scenario{ScenarioMode::kUniform, 50, 2, Area{5.0, 9.0, 0.0}, 0, 0,
                        {0, 9, 19, 29, 39, 49}, ""};
  ChannelParams channel{-61.71, 2.44, 1.7 * 1.7 * 2.44 * 2.44, 1};
  double q_obs = 0.8;
  std::string q_matrix_file;  // optional N x N CSV without header, overrides q_obs
  double ats_q = 0.85;

  Algorithm algorithm = Algorithm::kDomds;
  StepSchedule schedule{0.015, 0.7};
  ProjectionBox box{2.0};
  DomdsVariant variant = DomdsVariant::kLiteral;
  Readout readout = Readout::kDiagonal;  // centralized oja only
  std::uint64_t iterations = 20000;

  StepSchedule domle_schedule{0.05, 0.7};
  std::uint64_t domle_iterations = 5000;
  double domle_radius = 4.0;  // m

  int replicas = 1;
  std::uint64_t seed = 1;
  std::uint64_t first_checkpoint = 10;
  int threads = 0;            // 0 = hardware concurrency
  bool record_wall_time = false;

  // Throws ConfigError on any out-of-range field.
  void validate() const;

  ObservationModel observation_model() const;
};

// Applies one "key=value" assignment (dotted section prefixes, e.g.
// channel.eta=2.44). Throws ConfigError on unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Reads "key = value" lines; '#' starts a comment. Relative file references are
// resolved against the config file's directory.
ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Resolved configuration in the same key=value format, followed by derived
// constants (bias constant C, step sizes, expected receivers per broadcast).
std::string describe(const ExperimentConfig& config);

}  // namespace wsnloc
