#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "metastab/harness/config.hpp"

namespace metastab::harness {

inline constexpr int kSchemaVersion = 1;

struct RunReport {
  nlohmann::json config;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json records = nlohmann::json::array();
  std::vector<std::string> csv_columns;
  int failures = 0;       // replicas that ended with an error
  std::string timestamp;  // kept out of the data sections
  int threads = 1;

  // schema_version, version, config, summary, records; no timestamp.
  nlohmann::json data() const;
  nlohmann::json to_json() const;  // data() plus a "runtime" block
};

// Throws metastab::Error for configuration problems discovered before any replica runs.
RunReport run_experiment(const ExperimentConfig& cfg);

void write_csv(const RunReport& report, std::ostream& os);
void write_outputs(const RunReport& report, const ExperimentConfig& cfg, std::ostream& stdout_stream);

}  // namespace metastab::harness
