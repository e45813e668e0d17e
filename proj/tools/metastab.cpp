// metastab <subcommand> [--config file.toml|file.json] [overrides]
//
// Exit codes: 0 success, 2 validation error, 3 some replicas failed, 1 other runtime failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metastab/error.hpp"
#include "metastab/harness/config.hpp"
#include "metastab/harness/run.hpp"

namespace {

using nlohmann::json;
using namespace metastab;
using namespace metastab::harness;

struct Overrides {
  std::string config;
  std::optional<int> N, replicas, trajectories, exact_max_n;
  std::optional<double> beta, h, p, s, c1, c2, start_level, target_level, delta, eps, gamma;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> step_cap;
  std::optional<std::string> weight, start, json_out, csv_out;
  std::vector<double> v;
  bool dump = false;
};

void add_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "TOML or JSON experiment config")->check(CLI::ExistingFile);
  app->add_option("--N", o.N, "number of spins");
  app->add_option("--beta", o.beta, "inverse temperature");
  app->add_option("--h", o.h, "external field");
  app->add_option("--p", o.p, "edge probability in (0,1]");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--replicas", o.replicas, "disorder replicas");
  app->add_option("--s", o.s, "slack parameter");
  app->add_option("--c1", o.c1, "concentration constant c1 (placeholder default 1)");
  app->add_option("--c2", o.c2, "concentration constant c2 (placeholder default 1)");
  app->add_option("--g,--weight", o.weight, "weight: uniform | indicator:a,b");
  app->add_option("--start-level", o.start_level, "start magnetisation (snapped to the grid)");
  app->add_option("--target-level", o.target_level, "target magnetisation (snapped to the grid)");
  app->add_option("--trajectories", o.trajectories, "Monte Carlo trajectories");
  app->add_option("--step-cap", o.step_cap, "steps per trajectory before timeout (0 = automatic)");
  app->add_option("--start", o.start, "Monte Carlo start: uniform | exact-nu");
  app->add_option("--exact-max-n", o.exact_max_n, "ratio-study: largest N solved exactly");
  app->add_option("--delta", o.delta, "well decomposition delta");
  app->add_option("--eps", o.eps, "well decomposition eps");
  app->add_option("--gamma", o.gamma, "super-harmonic exponent gamma in (0,1)");
  app->add_option("--v", o.v, "Dirichlet test function over levels 0..N")->delimiter(',');
  app->add_option("--json", o.json_out, "JSON report path (default stdout)");
  app->add_option("--csv", o.csv_out, "CSV detail path");
  app->add_flag("--dump-config", o.dump, "print the resolved config as JSON and exit");
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

json merge(const Overrides& o, const std::string& mode) {
  json j = o.config.empty() ? json::object() : load_config_json(o.config);
  j["mode"] = mode;
  put(j, "N", o.N);
  put(j, "beta", o.beta);
  put(j, "h", o.h);
  put(j, "p", o.p);
  put(j, "seed", o.seed);
  put(j, "replicas", o.replicas);
  put(j, "s", o.s);
  put(j, "c1", o.c1);
  put(j, "c2", o.c2);
  put(j, "weight", o.weight);
  put(j, "start_level", o.start_level);
  put(j, "target_level", o.target_level);
  put(j, "trajectories", o.trajectories);
  put(j, "step_cap", o.step_cap);
  put(j, "start", o.start);
  put(j, "exact_max_n", o.exact_max_n);
  put(j, "delta", o.delta);
  put(j, "eps", o.eps);
  put(j, "gamma", o.gamma);
  if (!o.v.empty()) j["dirichlet_v"] = o.v;
  if (o.json_out) j["output"]["json"] = *o.json_out;
  if (o.csv_out) j["output"]["csv"] = *o.csv_out;
  return j;
}

bool is_validation(Errc e) {
  switch (e) {
    case Errc::InvalidArgument:
    case Errc::ConfigError:
    case Errc::NTooLarge:
    case Errc::FewerThanThreeRoots:
    case Errc::DeltaTooLarge:
    case Errc::EpsTooLarge:
    case Errc::TooFewReplicas:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for metastability of the dilute Curie-Weiss model"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Overrides o;
  const char* modes[][2] = {
      {"landscape", "free-energy landscape, critical points and well decomposition"},
      {"cw", "lumped Curie-Weiss chain: capacity and mean hitting time"},
      {"exact", "exact full-configuration chain per disorder replica"},
      {"bounds", "Dirichlet/Thomson capacity sandwich per replica"},
      {"concentration", "disorder statistics of the partition function"},
      {"mc", "Metropolis hitting-time simulation"},
      {"ratio-study", "mean exit time ratio against the Curie-Weiss chain"},
  };
  for (auto& m : modes) {
    CLI::App* sub = app.add_subcommand(m[0], m[1]);
    sub->set_help_flag("--help", "print help");
    add_options(sub, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = config_from_json(merge(o, mode));
    cfg.validate();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (o.dump) {
    std::cout << config_to_json(cfg).dump(2) << '\n';
    return 0;
  }

  try {
    const RunReport report = run_experiment(cfg);
    write_outputs(report, cfg, std::cout);
    if (report.failures > 0) {
      std::cerr << report.failures << " of " << cfg.replicas << " replicas failed\n";
      return 3;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return is_validation(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
