#include "metastab/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "metastab/error.hpp"
#include "metastab/harness/toml.hpp"

namespace metastab::harness {

using nlohmann::json;

namespace {

constexpr std::pair<Mode, const char*> kModes[] = {
    {Mode::Landscape, "landscape"},       {Mode::Cw, "cw"}, {Mode::Exact, "exact"},
    {Mode::Bounds, "bounds"},             {Mode::Concentration, "concentration"},
    {Mode::Mc, "mc"},                     {Mode::RatioStudy, "ratio-study"},
};

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  fail(Errc::ConfigError, "config field '" + field + "': " + msg);
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    const json& v = j[key];
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) bad(key, "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() && !v.is_number_unsigned()) bad(key, "expected an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) bad(key, "expected a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    bad(key, e.what());
  }
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return get<T>(j, key, T{});
}

}  // namespace

const char* mode_name(Mode m) {
  for (auto [mode, name] : kModes)
    if (mode == m) return name;
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (auto [mode, name] : kModes)
    if (s == name) return mode;
  bad("mode", "unknown mode '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (params.N < 2) bad("N", "must be at least 2");
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) bad("beta", "must be finite and >= 0");
  if (!std::isfinite(params.h)) bad("h", "must be finite");
  if (!(params.p > 0.0 && params.p <= 1.0)) bad("p", "must lie in (0, 1]");
  if (replicas < 1) bad("replicas", "must be at least 1");
  if (!std::isfinite(s)) bad("s", "must be finite");
  if (!(c1 > 0.0) || !std::isfinite(c1)) bad("c1", "must be positive");
  if (!(c2 > 0.0) || !std::isfinite(c2)) bad("c2", "must be positive");
  for (auto [name, v] : {std::pair{"start_level", start_level}, std::pair{"target_level", target_level}})
    if (v && !(*v >= -1.0 && *v <= 1.0)) bad(name, "magnetisation must lie in [-1, 1]");
  if (start != "uniform" && start != "exact-nu") bad("start", "must be 'uniform' or 'exact-nu'");
  if (trajectories < 10 && mode == Mode::Mc) bad("trajectories", "must be at least 10");
  if (step_cap < 0) bad("step_cap", "must be >= 0");
  if (exact_max_n < 2 || exact_max_n > 20) bad("exact_max_n", "must lie in [2, 20]");
  if (delta && !(*delta > 0.0)) bad("delta", "must be positive");
  if (eps && !(*eps > 0.0)) bad("eps", "must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) bad("gamma", "must lie in (0, 1)");
  if (!dirichlet_v.empty() && static_cast<int>(dirichlet_v.size()) != params.N + 1)
    bad("dirichlet_v", "needs N + 1 entries");

  switch (mode) {
    case Mode::Exact:
    case Mode::Bounds:
      if (params.N > 16) bad("N", "exact modes need N <= 16");
      break;
    case Mode::Concentration:
      if (params.N > 22) bad("N", "concentration needs N <= 22");
      if (replicas < 100) bad("replicas", "concentration needs at least 100 replicas");
      break;
    case Mode::Mc:
      if (start == "exact-nu" && params.N > 16) bad("start", "exact-nu start needs N <= 16");
      break;
    case Mode::RatioStudy:
      if (params.N > exact_max_n && trajectories < 10) bad("trajectories", "must be at least 10");
      break;
    default:
      break;
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::ConfigError, "config must be a table/object");
  static const std::set<std::string> known = {
      "mode", "N", "beta", "h", "p", "replicas", "seed", "s", "c1", "c2", "start_level", "target_level",
      "weight", "start", "trajectories", "step_cap", "exact_max_n", "delta", "eps", "gamma",
      "dirichlet_v", "output", "schema_version"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) bad(it.key(), "unknown field");

  ExperimentConfig c;
  if (j.contains("mode")) c.mode = parse_mode(get<std::string>(j, "mode", ""));
  c.params.N = get<int>(j, "N", c.params.N);
  c.params.beta = get<double>(j, "beta", c.params.beta);
  c.params.h = get<double>(j, "h", c.params.h);
  c.params.p = get<double>(j, "p", c.params.p);
  c.replicas = get<int>(j, "replicas", c.replicas);
  c.master_seed = get<std::uint64_t>(j, "seed", c.master_seed);
  c.s = get<double>(j, "s", c.s);
  c.c1 = get<double>(j, "c1", c.c1);
  c.c2 = get<double>(j, "c2", c.c2);
  c.start_level = get_opt<double>(j, "start_level");
  c.target_level = get_opt<double>(j, "target_level");
  c.weight = get<std::string>(j, "weight", c.weight);
  c.start = get<std::string>(j, "start", c.start);
  c.trajectories = get<int>(j, "trajectories", c.trajectories);
  c.step_cap = get<std::int64_t>(j, "step_cap", c.step_cap);
  c.exact_max_n = get<int>(j, "exact_max_n", c.exact_max_n);
  c.delta = get_opt<double>(j, "delta");
  c.eps = get_opt<double>(j, "eps");
  c.gamma = get<double>(j, "gamma", c.gamma);
  if (j.contains("dirichlet_v") && !j["dirichlet_v"].is_null()) {
    if (!j["dirichlet_v"].is_array()) bad("dirichlet_v", "expected an array of numbers");
    for (const auto& v : j["dirichlet_v"]) {
      if (!v.is_number()) bad("dirichlet_v", "expected an array of numbers");
      c.dirichlet_v.push_back(v.get<double>());
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) bad("output", "expected a table");
    for (auto it = o.begin(); it != o.end(); ++it)
      if (it.key() != "json" && it.key() != "csv") bad("output." + it.key(), "unknown field");
    c.json_out = get<std::string>(o, "json", "");
    c.csv_out = get<std::string>(o, "csv", "");
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["mode"] = mode_name(c.mode);
  j["N"] = c.params.N;
  j["beta"] = c.params.beta;
  j["h"] = c.params.h;
  j["p"] = c.params.p;
  j["replicas"] = c.replicas;
  j["seed"] = c.master_seed;
  j["s"] = c.s;
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["start_level"] = opt(c.start_level);
  j["target_level"] = opt(c.target_level);
  j["weight"] = c.weight;
  j["start"] = c.start;
  j["trajectories"] = c.trajectories;
  j["step_cap"] = c.step_cap;
  j["exact_max_n"] = c.exact_max_n;
  j["delta"] = opt(c.delta);
  j["eps"] = opt(c.eps);
  j["gamma"] = c.gamma;
  j["dirichlet_v"] = c.dirichlet_v;
  j["output"] = {{"json", c.json_out}, {"csv", c.csv_out}};
  return j;
}

json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigError, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (path.extension() == ".toml") return parse_toml(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(load_config_json(path));
}

}  // namespace metastab::harness
