#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metastab/params.hpp"

namespace metastab::harness {

enum class Mode { Landscape, Cw, Exact, Bounds, Concentration, Mc, RatioStudy };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct ExperimentConfig {
  Mode mode = Mode::Exact;
  ModelParams params;
  int replicas = 1;
  std::uint64_t master_seed = 1;
  double s = 3.0;
  double c1 = 1.0, c2 = 1.0;

  // Levels as magnetisations, snapped to the grid. Default: m_-(N) and m_+(N) of the landscape.
  std::optional<double> start_level;
  std::optional<double> target_level;

  std::string weight = "uniform";  // concentration: uniform | indicator:a,b
  std::string start = "uniform";   // mc: uniform | exact-nu
  int trajectories = 1000;
  std::int64_t step_cap = 0;       // 0 picks 50 N times the Eyring-Kramers value, or 1e8
  int exact_max_n = 14;            // ratio-study: exact at or below, Monte Carlo above

  std::optional<double> delta, eps;  // well decomposition; defaults derived from the landscape
  double gamma = 0.1;
  std::vector<double> dirichlet_v;   // bounds: user test function over levels 0..N

  std::string json_out;  // empty: stdout
  std::string csv_out;   // empty: no CSV

  void validate() const;  // throws Errc::ConfigError naming the field
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

// Chooses the parser from the extension (.toml or .json).
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json load_config_json(const std::filesystem::path& path);

}  // namespace metastab::harness
