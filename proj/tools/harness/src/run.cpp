#include "metastab/harness/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "metastab/cw_chain.hpp"
#include "metastab/disorder.hpp"
#include "metastab/disorder_stats.hpp"
#include "metastab/dynamics.hpp"
#include "metastab/error.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/landscape.hpp"
#include "metastab/numeric.hpp"
#include "metastab/parallel.hpp"
#include "metastab/variational.hpp"

#ifndef METASTAB_VERSION
#define METASTAB_VERSION "0.0.0"
#endif

namespace metastab::harness {

using nlohmann::json;

namespace {

struct Levels {
  int a, b;
};

std::optional<Landscape> try_landscape(const ModelParams& P) {
  try {
    return critical_points(P.beta, P.h);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Levels resolve_levels(const ExperimentConfig& c, bool need_increasing = true) {
  const int N = c.params.N;
  const MagGrid grid{N};
  std::optional<GridCriticalPoints> g;
  if (!c.start_level || !c.target_level) {
    auto L = try_landscape(c.params);
    if (!L)
      fail(Errc::ConfigError,
           "config fields 'start_level'/'target_level': required because beta = " + std::to_string(c.params.beta) +
               ", h = " + std::to_string(c.params.h) + " has no metastable well");
    g = L->on_grid(N);
  }
  Levels lv{c.start_level ? nearest_grid(*c.start_level, grid) : g->k_minus,
            c.target_level ? nearest_grid(*c.target_level, grid) : g->k_plus};
  if (need_increasing && !(lv.a < lv.b))
    fail(Errc::ConfigError, "config fields 'start_level'/'target_level': start must lie below target on the grid");
  return lv;
}

json level_json(const Levels& lv, int N) {
  return {{"k_start", lv.a}, {"k_target", lv.b}, {"m_start", 2.0 * lv.a / N - 1.0}, {"m_target", 2.0 * lv.b / N - 1.0}};
}

json solve_json(const SolveInfo& s) {
  return {{"method", s.method}, {"iterations", s.iterations}, {"residual", s.residual}};
}

json consts_json(const TheoremConstants& k) {
  return {{"alpha", k.alpha}, {"kappa", k.kappa}, {"eta_star", k.eta_star}, {"c1", k.c1}, {"c2", k.c2},
          {"C1", k.C1}, {"C2", k.C2}, {"c1_c2_are_placeholders", true}};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

json error_record(std::size_t r, std::uint64_t seed, const std::exception& e) {
  const auto* me = dynamic_cast<const Error*>(&e);
  return {{"replica", r}, {"seed", seed}, {"error", me ? errc_name(me->code()) : "Exception"}, {"message", e.what()}};
}

// Runs per-replica work in parallel, recording failures instead of aborting the run.
template <class F>
void for_replicas(RunReport& R, const ExperimentConfig& c, F&& work, bool parallel = true) {
  std::vector<json> rec(c.replicas);
  auto body = [&](std::size_t r) {
    const std::uint64_t seed = replica_seed(c.master_seed, r);
    try {
      rec[r] = work(r, seed);
      rec[r]["replica"] = r;
      rec[r]["seed"] = seed;
    } catch (const std::exception& e) {
      rec[r] = error_record(r, seed, e);
    }
  };
  if (parallel)
    parallel_for(c.replicas, body);
  else
    for (int r = 0; r < c.replicas; ++r) body(r);
  for (auto& x : rec) {
    if (x.contains("error")) ++R.failures;
    R.records.push_back(std::move(x));
  }
}

struct Stat {
  CompensatedSum sum;
  int n = 0;
  double min = std::numeric_limits<double>::infinity(), max = -std::numeric_limits<double>::infinity();
  void add(double x) {
    sum.add(x);
    ++n;
    min = std::min(min, x);
    max = std::max(max, x);
  }
  json to_json() const {
    if (n == 0) return nullptr;
    return {{"mean", sum.value() / n}, {"min", min}, {"max", max}, {"n", n}};
  }
};

// ---------------------------------------------------------------- landscape

void run_landscape(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const int N = P.N;
  const Landscape L = critical_points(P.beta, P.h);
  const auto g = L.on_grid(N);
  json& S = R.summary;
  S["critical_points"] = {{"m_minus", L.m_minus}, {"m_star", L.m_star}, {"m_plus", L.m_plus},
                          {"f_minus", L.f_minus}, {"f_star", L.f_star}, {"f_plus", L.f_plus},
                          {"fpp_minus", L.fpp_minus}, {"fpp_star", L.fpp_star}, {"fpp_plus", L.fpp_plus}};
  S["on_grid"] = {{"k_minus", g.k_minus}, {"k_star", g.k_star}, {"k_plus", g.k_plus},
                  {"m_minus_N", g.m_minus_N}, {"m_star_N", g.m_star_N}, {"m_plus_N", g.m_plus_N}};

  const double delta_max = std::min(f_beta(-1.0, P.beta, P.h), L.f_star) - L.f_minus;
  const double delta = c.delta.value_or(0.5 * delta_max);
  const double eps = c.eps.value_or(0.5 * (L.f_minus + delta - L.f_plus));
  try {
    const WellDecomposition W = well_decomposition(L, N, delta, eps);
    S["well"] = {{"delta", W.delta}, {"delta_N", W.delta_N}, {"m_delta", W.m_delta}, {"m_deltaN", W.m_deltaN},
                 {"eps", W.eps}, {"eps_N", W.eps_N}, {"m_eps", W.m_eps}, {"m_epsN", W.m_epsN},
                 {"m_plus_N", W.m_plus_N}, {"theta_N", W.theta_N},
                 {"U_minus", {W.U_minus.lo, W.U_minus.hi}}, {"U_plus", {W.U_plus.lo, W.U_plus.hi}}};
    const auto sh = superharmonic_lumped(L, W, c.gamma);
    S["superharmonic"] = {{"gamma", c.gamma}, {"levels", sh.levels.size()}, {"violations", sh.violations},
                          {"max_G_plus", sh.max_value}};
    const auto cb = monotone_crossing_bound(N, W.m_plus_N, W.theta_N, P.beta, P.h);
    S["crossing_bound"] = {{"k", cb.k}, {"ell_N", cb.ellN}, {"log_prob_lower", cb.log_prob_lower}};
  } catch (const Error& e) {
    S["well"] = {{"error", errc_name(e.code())}, {"message", e.what()}, {"delta", delta}, {"eps", eps}};
  }

  R.csv_columns = {"k", "m", "E", "I_N", "I", "stirling_residual", "f_N", "f"};
  for (int k = 0; k <= N; ++k) {
    const double m = 2.0 * k / N - 1.0;
    const auto et = entropy_terms(N, k);
    R.records.push_back({{"k", k}, {"m", m}, {"E", cw_energy_density(m, P.h)}, {"I_N", et.I_N}, {"I", et.I},
                         {"stirling_residual", et.stirling_residual}, {"f_N", f_beta_N(N, k, P.beta, P.h)},
                         {"f", f_beta(m, P.beta, P.h)}});
  }
}

// ---------------------------------------------------------------- cw

void run_cw(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const Levels lv = resolve_levels(c);
  const LumpedChain ch = build_lumped_chain(P.N, P.beta, P.h);
  const auto cap = cw_capacity(ch, lv.a, lv.b);
  const auto hit = cw_mean_hitting(ch, lv.a, lv.b);
  const double tri = cw_mean_hitting_tridiagonal_log(ch, lv.a, lv.b);
  json& S = R.summary;
  S["levels"] = level_json(lv, P.N);
  S["log_Ztilde"] = ch.log_Ztilde;
  S["capacity"] = {{"cap", cap.cap_exact}, {"log_cap", cap.log_cap_exact}, {"log_Zcap", cap.log_Zcap_exact},
                   {"log_cap_asymptotic", cap.log_cap_asymptotic ? json(*cap.log_cap_asymptotic) : json(nullptr)}};
  S["mean_hitting"] = {{"tau", hit.exact}, {"log_tau", hit.log_exact}, {"log_tau_tridiagonal", tri},
                       {"log_eyring_kramers", hit.log_eyring_kramers ? json(*hit.log_eyring_kramers) : json(nullptr)}};
  if (hit.log_eyring_kramers) S["mean_hitting"]["ratio_to_eyring_kramers"] = std::exp(hit.log_exact - *hit.log_eyring_kramers);
  if (cap.log_cap_asymptotic) S["capacity"]["ratio_to_asymptotic"] = std::exp(cap.log_cap_exact - *cap.log_cap_asymptotic);

  const auto v = cw_equilibrium_potential(ch, lv.a, lv.b);
  R.csv_columns = {"k", "m", "log_Q", "r_up", "r_down", "h"};
  for (int k = 0; k <= P.N; ++k)
    R.records.push_back({{"k", k}, {"m", 2.0 * k / P.N - 1.0}, {"log_Q", ch.log_Q(k)}, {"r_up", ch.r_up[k]},
                         {"r_down", ch.r_down[k]}, {"h", v[k]}});
}

// ---------------------------------------------------------------- exact

ExactOptions exact_opts() {
  ExactOptions o;
  o.max_n = 16;
  return o;
}

void run_exact(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const Levels lv = resolve_levels(c);
  const LumpedChain ch = build_lumped_chain(P.N, P.beta, P.h);
  const auto cw_cap = cw_capacity(ch, lv.a, lv.b);
  const auto cw_hit = cw_mean_hitting(ch, lv.a, lv.b);
  R.csv_columns = {"replica", "seed", "edges", "log_Z", "cap", "log_Zcap", "cap_dirichlet", "tau_nu_direct",
                   "tau_nu_capacity", "tau_rel_diff", "complement_defect"};
  for_replicas(R, c, [&](std::size_t, std::uint64_t seed) {
    const Disorder J = Disorder::sample(P, seed);
    const ExactChain X(J, P, exact_opts());
    const PairSolve ps = harmonic_function(X, lv.a, lv.b);
    const auto cap = capacity_exact(X, ps);
    const auto mh = mean_hitting_exact(X, ps);
    return json{{"edges", J.edge_count()}, {"log_Z", X.log_Z()}, {"cap", cap.cap}, {"log_cap", cap.log_cap},
                {"log_Zcap", cap.log_Zcap}, {"cap_dirichlet", cap.cap_dirichlet},
                {"tau_nu_direct", mh.tau_nu_direct}, {"tau_nu_capacity", mh.tau_nu_capacity},
                {"tau_rel_diff", rel(mh.tau_nu_direct, mh.tau_nu_capacity)},
                {"complement_defect", ps.complement_defect}, {"solve_AB", solve_json(ps.info_AB)},
                {"solve_BA", solve_json(ps.info_BA)}, {"solve_tau", solve_json(mh.info)}};
  });
  Stat cap, tau, diff;
  for (const auto& r : R.records) {
    if (r.contains("error")) continue;
    cap.add(r["cap"].get<double>());
    tau.add(r["tau_nu_direct"].get<double>());
    diff.add(r["tau_rel_diff"].get<double>());
  }
  json& S = R.summary;
  S["levels"] = level_json(lv, P.N);
  S["cap"] = cap.to_json();
  S["tau_nu"] = tau.to_json();
  S["tau_rel_diff"] = diff.to_json();
  S["lumped"] = {{"cap", cw_cap.cap_exact}, {"log_Zcap", cw_cap.log_Zcap_exact}, {"tau", cw_hit.exact}};
  if (P.p == 1.0 && cap.n > 0) {
    S["lumping_check"] = {{"cap_rel_diff", rel(cap.max, cw_cap.cap_exact)},
                          {"tau_rel_diff", rel(tau.max, cw_hit.exact)}};
  }
  S["failures"] = R.failures;
}

// ---------------------------------------------------------------- bounds

void run_bounds(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const Levels lv = resolve_levels(c);
  const LumpedChain ch = build_lumped_chain(P.N, P.beta, P.h);
  const auto cw_cap = cw_capacity(ch, lv.a, lv.b);
  const std::vector<double> v = c.dirichlet_v.empty() ? cw_equilibrium_potential(ch, lv.a, lv.b) : c.dirichlet_v;
  const MagFlow flow = unit_flow(P.N, lv.a, lv.b);
  const FlowReport fr = validate_flow(flow, P.N <= 16);
  const TheoremConstants k = constants(P, c.c1, c.c2);
  const double band = c.s + 2.0 * P.beta * (1.0 + P.h) + k.alpha;
  constexpr double slack = 1e-10;

  R.csv_columns = {"seed", "log_cap_exact", "log_lower", "log_upper", "log_Zcap_over_Ztildecap", "in_sandwich"};
  for_replicas(R, c, [&](std::size_t, std::uint64_t seed) {
    const Disorder J = Disorder::sample(P, seed);
    const ExactChain X(J, P, exact_opts());
    const auto cap = capacity_exact(X, harmonic_function(X, lv.a, lv.b));
    const double lo = thomson_lower(X, flow), up = dirichlet_upper(X, lv.a, lv.b, v);
    const double ratio = cap.log_Zcap - cw_cap.log_Zcap_exact;
    const bool in = lo <= cap.log_cap + slack && cap.log_cap <= up + slack;
    return json{{"log_cap_exact", cap.log_cap}, {"log_lower", lo}, {"log_upper", up},
                {"log_Zcap_over_Ztildecap", ratio}, {"in_sandwich", in ? 1 : 0}, {"in_theorem_band", std::abs(ratio) <= band}};
  });
  int ok = 0, cov = 0, n = 0;
  for (const auto& r : R.records) {
    if (r.contains("error")) continue;
    ++n;
    ok += r["in_sandwich"].get<int>();
    cov += r["in_theorem_band"].get<bool>() ? 1 : 0;
  }
  json& S = R.summary;
  S["levels"] = level_json(lv, P.N);
  S["test_function"] = c.dirichlet_v.empty() ? "cw_equilibrium_potential" : "user";
  S["flow"] = {{"antisymmetry_error", fr.antisymmetry_error}, {"divergence_error", fr.divergence_error},
               {"flux_out", fr.flux_out}, {"flux_in", fr.flux_in}, {"ok", fr.ok}};
  S["sandwich_holds"] = ok;
  S["replicas_ok"] = n;
  S["theorem_band_log_halfwidth"] = band;
  S["theorem_band_coverage"] = n ? static_cast<double>(cov) / n : 0.0;
  S["constants"] = consts_json(k);
  S["failures"] = R.failures;
}

// ---------------------------------------------------------------- concentration

void run_concentration(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const WeightFunction g = parse_weight(c.weight, P.N);
  const auto rep = concentration_report(P, g, c.replicas, c.master_seed, c.s, c.c1, c.c2);
  R.csv_columns = {"seed", "F_Ng", "Y"};
  for (int r = 0; r < rep.replicas; ++r)
    R.records.push_back({{"replica", r}, {"seed", rep.seeds[r]}, {"F_Ng", rep.F[r]}, {"Y", rep.Y[r]},
                         {"log_ratio_to_reference", rep.log_ratio_to_reference[r]}});
  json tail = json::array();
  const std::size_t stride = std::max<std::size_t>(1, rep.tail.size() / 50);
  for (std::size_t i = 0; i < rep.tail.size(); i += stride) tail.push_back({rep.tail[i].t, rep.tail[i].survival});
  json& S = R.summary;
  S["weight"] = c.weight;
  S["p_hat"] = rep.p_hat;
  S["p_hat_se"] = rep.p_hat_se;
  S["var_Y"] = rep.var_Y;
  S["var_Y_bootstrap_se"] = rep.var_Y_se;
  S["var_ratio_p2_over_beta2"] = rep.ratio;
  S["lipschitz_scale"] = rep.lipschitz;
  S["tail_fit"] = {{"gamma", rep.gamma_fit}, {"c", rep.c_fit}, {"points", tail}};
  S["s"] = rep.s;
  S["sandwich_coverage"] = rep.coverage;
  S["log_first_moment"] = exact_first_moment(P, g);
  S["log_reference_sum"] = log_reference_sum(g);
  S["constants"] = consts_json(rep.consts);
}

// ---------------------------------------------------------------- mc

std::int64_t default_cap(const ExperimentConfig& c, const Levels& lv) {
  if (c.step_cap > 0) return c.step_cap;
  const LumpedChain ch = build_lumped_chain(c.params.N, c.params.beta, c.params.h);
  if (lv.a < lv.b) {
    const auto hit = cw_mean_hitting(ch, lv.a, lv.b);
    if (hit.log_eyring_kramers) {
      const double cap = 50.0 * c.params.N * std::exp(*hit.log_eyring_kramers);
      if (cap < 1e15) return std::max<std::int64_t>(1000, static_cast<std::int64_t>(cap));
    }
  }
  return 100'000'000;
}

void run_mc(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const Levels lv = resolve_levels(c, false);
  const Disorder J = Disorder::sample(P, replica_seed(c.master_seed, 0));
  HittingJob job;
  job.params = P;
  job.start = {lv.a, c.start == "exact-nu" ? StartSampler::ExactNu : StartSampler::UniformOnLevel};
  job.target_level = lv.b;
  job.trajectories = c.trajectories;
  job.step_cap = default_cap(c, lv);
  job.master_seed = c.master_seed;
  json& S = R.summary;
  std::optional<LastExit> nu;
  if (job.start.sampler == StartSampler::ExactNu) {
    if (lv.a == lv.b) fail(Errc::ConfigError, "config field 'start': exact-nu needs distinct start and target levels");
    const ExactChain X(J, P, exact_opts());
    const PairSolve ps = harmonic_function(X, lv.a, lv.b);
    nu = last_exit_distribution(X, ps);
    S["exact_tau_nu"] = mean_hitting_exact(X, ps).tau_nu_direct;
  }
  const HittingEstimate est = estimate_hitting(job, J, nu ? &*nu : nullptr);
  S["levels"] = level_json(lv, P.N);
  S["disorder_seed"] = J.seed();
  S["step_cap"] = job.step_cap;
  S["mean"] = est.mean;
  S["ci95"] = est.ci95;
  S["completed"] = est.completed;
  S["timeouts"] = est.timeouts;
  if (lv.a < lv.b) {
    const auto hit = cw_mean_hitting(build_lumped_chain(P.N, P.beta, P.h), lv.a, lv.b);
    S["cw_exact"] = hit.exact;
    S["eyring_kramers"] = hit.eyring_kramers ? json(*hit.eyring_kramers) : json(nullptr);
  }
  R.csv_columns = {"trajectory", "hit_time", "timed_out"};
  for (std::size_t t = 0; t < est.times.size(); ++t)
    R.records.push_back({{"trajectory", t}, {"hit_time", est.times[t]}, {"timed_out", est.times[t] < 0 ? 1 : 0}});
}

// ---------------------------------------------------------------- ratio-study

void run_ratio(RunReport& R, const ExperimentConfig& c) {
  const ModelParams& P = c.params;
  const Levels lv = resolve_levels(c);
  const TheoremConstants k = constants(P, c.c1, c.c2);
  const double lo = k.C1 * std::exp(-c.s), hi = k.C2 * std::exp(c.s);
  const double cw = cw_mean_hitting(build_lumped_chain(P.N, P.beta, P.h), lv.a, lv.b).exact;
  const bool exact = P.N <= c.exact_max_n;
  const std::int64_t cap = exact ? 0 : default_cap(c, lv);

  R.csv_columns = {"replica", "seed", "tau_nu", "tau_cw", "ratio", "in_band"};
  for_replicas(
      R, c,
      [&](std::size_t r, std::uint64_t seed) {
        const Disorder J = Disorder::sample(P, seed);
        json out;
        double tau;
        if (exact) {
          const ExactChain X(J, P, exact_opts());
          const auto mh = mean_hitting_exact(X, harmonic_function(X, lv.a, lv.b));
          tau = mh.tau_nu_direct;
          out["tau_nu_capacity"] = mh.tau_nu_capacity;
          out["method"] = "exact";
        } else {
          HittingJob job;
          job.params = P;
          job.start = {lv.a, StartSampler::UniformOnLevel};
          job.target_level = lv.b;
          job.trajectories = c.trajectories;
          job.step_cap = cap;
          job.master_seed = c.master_seed;
          job.replica = r;
          const auto est = estimate_hitting(job, J);
          tau = est.mean;
          out["ci95"] = est.ci95;
          out["timeouts"] = est.timeouts;
          out["method"] = "mc";
        }
        if (!(tau > 0.0) || !std::isfinite(tau)) fail(Errc::SolverError, "mean hitting time is not finite and positive");
        const double ratio = tau / cw;
        out["tau_nu"] = tau;
        out["tau_cw"] = cw;
        out["ratio"] = ratio;
        out["in_band"] = (ratio >= lo && ratio <= hi) ? 1 : 0;
        return out;
      },
      exact);
  int in = 0, n = 0;
  Stat ratio;
  for (const auto& r : R.records) {
    if (r.contains("error")) continue;
    ++n;
    in += r["in_band"].get<int>();
    ratio.add(r["ratio"].get<double>());
  }
  json& S = R.summary;
  S["levels"] = level_json(lv, P.N);
  S["method"] = exact ? "exact" : "mc";
  S["tau_cw"] = cw;
  S["band"] = {lo, hi};
  S["band_nonempty"] = lo < hi;
  S["coverage"] = n ? static_cast<double>(in) / n : 0.0;
  S["ratio"] = ratio.to_json();
  S["constants"] = consts_json(k);
  S["s"] = c.s;
  S["failures"] = R.failures;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

}  // namespace

json RunReport::data() const {
  return {{"schema_version", kSchemaVersion}, {"version", METASTAB_VERSION}, {"config", config},
          {"summary", summary}, {"records", records}};
}

json RunReport::to_json() const {
  json j = data();
  j["runtime"] = {{"timestamp", timestamp}, {"threads", threads}, {"failures", failures}};
  return j;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunReport R;
  R.config = config_to_json(cfg);
  R.timestamp = utc_now();
  R.threads = thread_count();
  switch (cfg.mode) {
    case Mode::Landscape: run_landscape(R, cfg); break;
    case Mode::Cw: run_cw(R, cfg); break;
    case Mode::Exact: run_exact(R, cfg); break;
    case Mode::Bounds: run_bounds(R, cfg); break;
    case Mode::Concentration: run_concentration(R, cfg); break;
    case Mode::Mc: run_mc(R, cfg); break;
    case Mode::RatioStudy: run_ratio(R, cfg); break;
  }
  return R;
}

void write_csv(const RunReport& R, std::ostream& os) {
  os << "# schema_version=" << kSchemaVersion << " mode=" << R.config.value("mode", "") << '\n';
  for (std::size_t i = 0; i < R.csv_columns.size(); ++i) os << (i ? "," : "") << R.csv_columns[i];
  os << '\n';
  for (const auto& r : R.records) {
    if (r.contains("error")) continue;
    for (std::size_t i = 0; i < R.csv_columns.size(); ++i)
      os << (i ? "," : "") << (r.contains(R.csv_columns[i]) ? csv_cell(r[R.csv_columns[i]]) : "");
    os << '\n';
  }
}

void write_outputs(const RunReport& R, const ExperimentConfig& c, std::ostream& out) {
  const std::string text = R.to_json().dump(2) + "\n";
  if (c.json_out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.json_out);
    if (!(f << text)) fail(Errc::IoError, "cannot write " + c.json_out);
  }
  if (!c.csv_out.empty()) {
    std::ofstream f(c.csv_out);
    write_csv(R, f);
    if (!f) fail(Errc::IoError, "cannot write " + c.csv_out);
  }
}

}  // namespace metastab::harness
