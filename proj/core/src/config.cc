#include "wsnloc/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "wsnloc/csv.h"
#include "wsnloc/error.h"

namespace wsnloc {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "batch-mds") return Algorithm::kBatchMds;
  if (name == "oja") return Algorithm::kOja;
  if (name == "domds") return Algorithm::kDomds;
  if (name == "domle") return Algorithm::kDomle;
  if (name == "domds+domle") return Algorithm::kDomdsDomle;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected batch-mds|oja|domds|domle|domds+domle)");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBatchMds: return "batch-mds";
    case Algorithm::kOja: return "oja";
    case Algorithm::kDomds: return "domds";
    case Algorithm::kDomle: return "domle";
    case Algorithm::kDomdsDomle: return "domds+domle";
  }
  return "domds";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string text(value);
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + std::string(key) + "': cannot parse '" + std::string(value) +
                      "' as a number");
  }
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + std::string(key) + "': cannot parse '" + std::string(value) +
                      "' as an integer");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("'" + std::string(key) + "': expected true|false");
}

std::vector<int> to_index_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (t.empty()) continue;
    out.push_back(to_int<int>(key, t));
  }
  return out;
}

ScenarioMode to_mode(std::string_view value) {
  if (value == "grid") return ScenarioMode::kGrid;
  if (value == "uniform") return ScenarioMode::kUniform;
  if (value == "explicit") return ScenarioMode::kExplicit;
  throw ConfigError("scenario.mode: expected grid|uniform|explicit, got '" + std::string(value) + "'");
}

std::string_view mode_name(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kGrid: return "grid";
    case ScenarioMode::kUniform: return "uniform";
    case ScenarioMode::kExplicit: return "explicit";
  }
  return "uniform";
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"scenario.mode", [](auto& c, auto, auto v) { c.scenario.mode = to_mode(v); }},
      {"scenario.n", [](auto& c, auto k, auto v) { c.scenario.n = to_int<int>(k, v); }},
      {"scenario.p", [](auto& c, auto k, auto v) { c.scenario.p = to_int<int>(k, v); }},
      {"scenario.width", [](auto& c, auto k, auto v) { c.scenario.area.width = to_double(k, v); }},
      {"scenario.height", [](auto& c, auto k, auto v) { c.scenario.area.height = to_double(k, v); }},
      {"scenario.depth", [](auto& c, auto k, auto v) { c.scenario.area.depth = to_double(k, v); }},
      {"scenario.rows", [](auto& c, auto k, auto v) { c.scenario.rows = to_int<int>(k, v); }},
      {"scenario.cols", [](auto& c, auto k, auto v) { c.scenario.cols = to_int<int>(k, v); }},
      {"scenario.anchors", [](auto& c, auto k, auto v) { c.scenario.anchors = to_index_list(k, v); }},
      {"scenario.file", [](auto& c, auto, auto v) { c.scenario.positions_file = std::string(v); }},
      {"channel.pl0", [](auto& c, auto k, auto v) { c.channel.pl0 = to_double(k, v); }},
      {"channel.eta", [](auto& c, auto k, auto v) { c.channel.eta = to_double(k, v); }},
      {"channel.sigma2", [](auto& c, auto k, auto v) { c.channel.sigma2 = to_double(k, v); }},
      {"channel.sigma_over_eta",
       [](auto& c, auto k, auto v) {
         const double r = to_double(k, v);
         c.channel.sigma2 = (r * c.channel.eta) * (r * c.channel.eta);
       }},
      {"channel.t_samples", [](auto& c, auto k, auto v) { c.channel.t_samples = to_int<int>(k, v); }},
      {"observation.q", [](auto& c, auto k, auto v) { c.q_obs = to_double(k, v); }},
      {"observation.matrix", [](auto& c, auto, auto v) { c.q_matrix_file = std::string(v); }},
      {"ats.q", [](auto& c, auto k, auto v) { c.ats_q = to_double(k, v); }},
      {"algorithm", [](auto& c, auto, auto v) { c.algorithm = parse_algorithm(v); }},
      {"schedule.a", [](auto& c, auto k, auto v) { c.schedule.a = to_double(k, v); }},
      {"schedule.beta", [](auto& c, auto k, auto v) { c.schedule.beta = to_double(k, v); }},
      {"box.alpha", [](auto& c, auto k, auto v) { c.box.alpha = to_double(k, v); }},
      {"domds.variant", [](auto& c, auto, auto v) { c.variant = parse_domds_variant(v); }},
      {"readout", [](auto& c, auto, auto v) { c.readout = parse_readout(v); }},
      {"run.iterations",
       [](auto& c, auto k, auto v) { c.iterations = to_int<std::uint64_t>(k, v); }},
      {"run.replicas", [](auto& c, auto k, auto v) { c.replicas = to_int<int>(k, v); }},
      {"run.seed", [](auto& c, auto k, auto v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"run.first_checkpoint",
       [](auto& c, auto k, auto v) { c.first_checkpoint = to_int<std::uint64_t>(k, v); }},
      {"run.threads", [](auto& c, auto k, auto v) { c.threads = to_int<int>(k, v); }},
      {"run.wall_time", [](auto& c, auto k, auto v) { c.record_wall_time = to_bool(k, v); }},
      {"domle.a", [](auto& c, auto k, auto v) { c.domle_schedule.a = to_double(k, v); }},
      {"domle.beta", [](auto& c, auto k, auto v) { c.domle_schedule.beta = to_double(k, v); }},
      {"domle.iterations",
       [](auto& c, auto k, auto v) { c.domle_iterations = to_int<std::uint64_t>(k, v); }},
      {"domle.radius", [](auto& c, auto k, auto v) { c.domle_radius = to_double(k, v); }},
  };
  return table;
}

std::string resolve_path(const std::string& base_dir, const std::string& file) {
  if (file.empty()) return file;
  const std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const auto it = setters().find(trim(key));
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  it->second(config, trim(key), trim(value));
}

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
  ExperimentConfig config;
  std::vector<std::pair<std::string, std::string>> deferred;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    // sigma/eta depends on eta, wherever eta appears in the file.
    if (key == "channel.sigma_over_eta") {
      deferred.emplace_back(key, value);
      continue;
    }
    try {
      apply_setting(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const auto& [key, value] : deferred) apply_setting(config, key, value);
  config.scenario.positions_file = resolve_path(base_dir, config.scenario.positions_file);
  config.q_matrix_file = resolve_path(base_dir, config.q_matrix_file);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(in, dir.empty() ? "." : dir.string());
}

void ExperimentConfig::validate() const {
  channel.validate();
  schedule.validate();
  box.validate();
  if (algorithm == Algorithm::kDomle || algorithm == Algorithm::kDomdsDomle) {
    domle_schedule.validate();
    if (!(domle_radius > 0.0)) throw ConfigError("domle.radius must be > 0");
    if (domle_iterations < 1) throw ConfigError("domle.iterations must be >= 1");
  }
  if (!(q_obs > 0.0 && q_obs <= 1.0)) throw ConfigError("observation.q must lie in (0, 1]");
  if (!(ats_q > 0.0 && ats_q < 1.0)) throw ConfigError("ats.q must lie in (0, 1)");
  if (iterations < 1) throw ConfigError("run.iterations must be >= 1");
  if (replicas < 1) throw ConfigError("run.replicas must be >= 1");
  if (first_checkpoint < 1) throw ConfigError("run.first_checkpoint must be >= 1");
  if (threads < 0) throw ConfigError("run.threads must be >= 0");
  if (scenario.mode != ScenarioMode::kExplicit) {
    if (scenario.p != 2 && scenario.p != 3) throw ConfigError("scenario.p must be 2 or 3");
    if (scenario.n < scenario.p + 1) throw ConfigError("scenario.n must be >= p+1");
    for (int a : scenario.anchors) {
      if (a < 0 || a >= scenario.n) {
        throw ConfigError("scenario.anchors: index " + std::to_string(a) + " out of range");
      }
    }
  } else if (scenario.positions_file.empty()) {
    throw ConfigError("scenario.mode=explicit requires scenario.file");
  }
}

ObservationModel ExperimentConfig::observation_model() const {
  if (q_matrix_file.empty()) {
    // Explicit scenarios learn N from the file; callers resize via the scenario.
    return ObservationModel::uniform(scenario.n, q_obs);
  }
  std::ifstream in(q_matrix_file);
  if (!in) throw IoError("cannot open q matrix '" + q_matrix_file + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string cell;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) row.push_back(to_double("observation.matrix", trim(cell)));
    rows.push_back(std::move(row));
  }
  Matrix q(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ConfigError("observation.matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return ObservationModel(std::move(q));
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream out;
  auto num = [](double v) { return format_number(v); };
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
  };
  out << "scenario.mode = " << mode_name(c.scenario.mode) << '\n'
      << "scenario.n = " << c.scenario.n << '\n'
      << "scenario.p = " << c.scenario.p << '\n'
      << "scenario.width = " << num(c.scenario.area.width) << '\n'
      << "scenario.height = " << num(c.scenario.area.height) << '\n';
  if (c.scenario.p == 3) out << "scenario.depth = " << num(c.scenario.area.depth) << '\n';
  if (c.scenario.mode == ScenarioMode::kGrid) {
    out << "scenario.rows = " << c.scenario.rows << '\n' << "scenario.cols = " << c.scenario.cols << '\n';
  }
  if (!c.scenario.positions_file.empty()) out << "scenario.file = " << c.scenario.positions_file << '\n';
  out << "scenario.anchors = " << list(c.scenario.anchors) << '\n'
      << "channel.pl0 = " << num(c.channel.pl0) << '\n'
      << "channel.eta = " << num(c.channel.eta) << '\n'
      << "channel.sigma2 = " << num(c.channel.sigma2) << '\n'
      << "channel.t_samples = " << c.channel.t_samples << '\n'
      << "observation.q = " << num(c.q_obs) << '\n';
  if (!c.q_matrix_file.empty()) out << "observation.matrix = " << c.q_matrix_file << '\n';
  out << "ats.q = " << num(c.ats_q) << '\n'
      << "algorithm = " << to_string(c.algorithm) << '\n'
      << "schedule.a = " << num(c.schedule.a) << '\n'
      << "schedule.beta = " << num(c.schedule.beta) << '\n'
      << "box.alpha = " << num(c.box.alpha) << '\n'
      << "domds.variant = " << to_string(c.variant) << '\n'
      << "readout = " << to_string(c.readout) << '\n'
      << "domle.a = " << num(c.domle_schedule.a) << '\n'
      << "domle.beta = " << num(c.domle_schedule.beta) << '\n'
      << "domle.iterations = " << c.domle_iterations << '\n'
      << "domle.radius = " << num(c.domle_radius) << '\n'
      << "run.iterations = " << c.iterations << '\n'
      << "run.replicas = " << c.replicas << '\n'
      << "run.seed = " << c.seed << '\n'
      << "run.first_checkpoint = " << c.first_checkpoint << '\n'
      << "run.threads = " << c.threads << '\n'
      << "run.wall_time = " << (c.record_wall_time ? "true" : "false") << '\n';

  const double bias = bias_constant(c.channel);
  out << "\n# derived\n"
      << "# sigma_db = " << num(std::sqrt(c.channel.sigma2)) << '\n'
      << "# sigma_over_eta = " << num(std::sqrt(c.channel.sigma2) / c.channel.eta) << '\n'
      << "# bias_constant_C = " << num(bias) << '\n'
      << "# relative_variance_C8_minus_1 = " << num(std::pow(bias, 8) - 1.0) << '\n'
      << "# log_residual_variance = " << num(c.channel.sigma2 / (100.0 * c.channel.eta * c.channel.eta))
      << '\n'
      << "# gamma_1 = " << num(c.schedule(1)) << '\n'
      << "# gamma_final = " << num(c.schedule(c.iterations)) << '\n'
      << "# schedule_convergent = " << (c.schedule.convergent() ? "true" : "false") << '\n'
      << "# expected_receivers_per_broadcast = " << num((c.scenario.n - 1) * c.ats_q) << '\n'
      << "# scalars_per_tick = " << (c.scenario.p + 1) + c.scenario.p * c.scenario.p << '\n'
      << "# unknown_nodes = " << c.scenario.n - static_cast<int>(c.scenario.anchors.size()) << '\n';
  return out.str();
}

}  // namespace wsnloc
