#include "metastab/disorder_stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/landscape.hpp"
#include "metastab/numeric.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/spin.hpp"

namespace metastab {

double kappa_objective(double eta, const ModelParams& P, double c1, double c2) {
  if (!(eta > 0.0 && eta < 1.0)) return kNegInf;
  const double alpha = P.beta * P.beta * (1.0 - P.p) / (4.0 * P.p);
  const double arg = 2.0 * alpha + std::log(c1) - 2.0 * std::log1p(-eta);
  if (arg < 0.0) return kNegInf;
  return std::log(eta) - P.beta * std::sqrt(arg) / (P.p * std::sqrt(2.0 * c2));
}

TheoremConstants constants(const ModelParams& P, double c1, double c2) {
  P.validate();
  if (!(c1 > 0.0 && c2 > 0.0)) fail(Errc::InvalidArgument, "c1 and c2 must be positive");
  TheoremConstants c;
  c.c1 = c1;
  c.c2 = c2;
  c.alpha = P.beta * P.beta * (1.0 - P.p) / (4.0 * P.p);

  // eta = logistic(t): resolves maximisers crowding either end of (0,1).
  auto eta_of = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  auto obj = [&](double t) { return kappa_objective(eta_of(t), P, c1, c2); };
  constexpr int M = 4000;
  constexpr double lo = -40.0, hi = 40.0, dt = (hi - lo) / M;
  int best = 0;
  double best_v = kNegInf;
  for (int i = 0; i <= M; ++i) {
    const double v = obj(lo + i * dt);
    if (v > best_v) best_v = v, best = i;
  }
  if (best_v == kNegInf) fail(Errc::InvalidArgument, "kappa objective undefined on (0,1)");
  double a = lo + std::max(best - 1, 0) * dt, b = lo + std::min(best + 1, M) * dt;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = obj(x1), f2 = obj(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + invphi * (b - a), f2 = obj(x2);
    } else {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - invphi * (b - a), f1 = obj(x1);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = std::max(obj(t), best_v);
  c.eta_star = obj(t) >= best_v ? eta_of(t) : eta_of(lo + best * dt);
  c.kappa = c.alpha + v;
  c.C1 = std::exp(-2.0 * P.beta * (1.0 + P.h) - c.alpha + c.kappa);
  c.C2 = std::exp(2.0 * P.beta * (1.0 + P.h) + 2.0 * c.alpha);
  return c;
}

WeightFunction WeightFunction::uniform(int N) {
  require(N >= 1, "N must be positive");
  return WeightFunction{std::vector<double>(N + 1, 0.0)};
}

WeightFunction WeightFunction::indicator(int N, int k_lo, int k_hi) {
  require(N >= 1 && k_lo >= 0 && k_hi <= N && k_lo <= k_hi, "indicator levels off the grid");
  WeightFunction g{std::vector<double>(N + 1, kNegInf)};
  for (int k = k_lo; k <= k_hi; ++k) g.log_g[k] = 0.0;
  return g;
}

WeightFunction WeightFunction::from_values(const std::vector<double>& v) {
  WeightFunction g;
  g.log_g.reserve(v.size());
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(Errc::InvalidArgument, "weights must be finite and nonnegative");
    g.log_g.push_back(x > 0.0 ? std::log(x) : kNegInf);
  }
  g.validate();
  return g;
}

void WeightFunction::validate() const {
  require(log_g.size() >= 2, "weight function needs at least two levels");
  bool any = false;
  for (double x : log_g) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
      fail(Errc::InvalidArgument, "weight function has an invalid entry");
    any = any || x != kNegInf;
  }
  if (!any) fail(Errc::InvalidArgument, "weight function is identically zero");
}

WeightFunction parse_weight(const std::string& spec, int N) {
  if (spec == "uniform" || spec == "1") return WeightFunction::uniform(N);
  const std::string prefix = "indicator:";
  if (spec.rfind(prefix, 0) == 0) {
    std::istringstream is(spec.substr(prefix.size()));
    double a = 0, b = 0;
    char comma = 0;
    if ((is >> a >> comma >> b) && comma == ',' && is.peek() == std::char_traits<char>::eof()) {
      if (a > b) fail(Errc::InvalidArgument, "indicator needs a <= b");
      const MagGrid grid{N};
      return WeightFunction::indicator(N, nearest_grid(a, grid), nearest_grid(b, grid));
    }
  }
  fail(Errc::InvalidArgument, "weight must be 'uniform' or 'indicator:a,b', got '" + spec + "'");
}

CouplingHistogram coupling_histogram(const Disorder& J) {
  const int N = J.size();
  if (N > kMaxStatsN) fail(Errc::NTooLarge, "exact partition sums need N <= " + std::to_string(kMaxStatsN));
  require(N >= 2, "N must be at least 2");
  CouplingHistogram H;
  H.N = N;
  H.max_pairs = static_cast<int>(Disorder::pair_count(N));
  const int width = 2 * H.max_pairs + 1;
  H.count.assign(static_cast<std::size_t>(N + 1) * width, 0);

  const auto rows = J.row_masks();
  std::vector<int> deg(N);
  for (int i = 0; i < N; ++i) deg[i] = std::popcount(rows[i]);

  // Gray-code walk from all-minus; S_J changes by -2 s_l k_l on flipping l.
  std::uint64_t s = 0;
  int k = 0;
  long sj = static_cast<long>(J.edge_count());
  ++H.count[static_cast<std::size_t>(sj + H.max_pairs)];
  const std::uint64_t total = 1ULL << N;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int l = std::countr_zero(i);
    const bool up = (s >> l) & 1ULL;
    const int field = 2 * std::popcount(rows[l] & s) - deg[l];
    sj += up ? -2 * field : 2 * field;
    s ^= 1ULL << l;
    k += up ? -1 : 1;
    ++H.count[static_cast<std::size_t>(k) * width + (sj + H.max_pairs)];
  }
  return H;
}

namespace {

double sign_of(DeltaSign s) { return s == DeltaSign::Minus ? 1.0 : -1.0; }

void check_sizes(const ModelParams& P, const WeightFunction& g, int N) {
  P.validate();
  g.validate();
  require(P.N == N && g.N() == N, "weight function, disorder and parameters disagree on N");
}

}  // namespace

PartitionStats partition_stats(const CouplingHistogram& H, const ModelParams& P, const WeightFunction& g,
                               DeltaSign sign) {
  check_sizes(P, g, H.N);
  const int N = H.N;
  const double np = N * P.p, sg = sign_of(sign);
  LogSum acc;
  for (int k = 0; k <= N; ++k) {
    if (g.log_g[k] == kNegInf) continue;
    const double M = 2.0 * k - N;
    const double S = 0.5 * (M * M - N);
    for (int sj = -H.max_pairs; sj <= H.max_pairs; ++sj) {
      const std::uint32_t c = H.at(k, sj);
      if (c == 0) continue;
      // -beta Delta = beta (S_J - p S) / (N p)
      acc.add(g.log_g[k] + std::log(static_cast<double>(c)) + sg * P.beta * (sj - P.p * S) / np);
    }
  }
  const double lz = acc.value();
  return {lz, lz / N};
}

PartitionStats partition_stats(const Disorder& J, const ModelParams& P, const WeightFunction& g,
                               DeltaSign sign) {
  return partition_stats(coupling_histogram(J), P, g, sign);
}

PartitionStats partition_stats_slow(const Disorder& J, const ModelParams& P, const WeightFunction& g,
                                    DeltaSign sign) {
  const int N = J.size();
  if (N > kMaxStatsN) fail(Errc::NTooLarge, "exact partition sums need N <= " + std::to_string(kMaxStatsN));
  check_sizes(P, g, N);
  const double sg = sign_of(sign);
  LogSum acc;
  for (std::uint64_t m = 0; m < (1ULL << N); ++m) {
    const int k = std::popcount(m);
    if (g.log_g[k] == kNegInf) continue;
    const SpinConfig s = SpinConfig::from_mask(m, N);
    acc.add(g.log_g[k] - sg * P.beta * delta_term(s, J, P));
  }
  const double lz = acc.value();
  return {lz, lz / N};
}

double log_reference_sum(const WeightFunction& g) {
  g.validate();
  LogSum acc;
  for (int k = 0; k <= g.N(); ++k)
    if (g.log_g[k] != kNegInf) acc.add(g.log_g[k] + log_binom(g.N(), k));
  return acc.value();
}

double log_phi(double x, double p) {
  // Factor out the larger exponential so the remainder stays in (0, 1].
  if (x >= 0.0) return x * (1.0 - p) + std::log1p((1.0 - p) * std::expm1(-x));
  return -x * p + std::log1p(p * std::expm1(x));
}

double exact_first_moment(const ModelParams& P, const WeightFunction& g) {
  P.validate();
  g.validate();
  require(g.N() == P.N, "weight function has the wrong length");
  const int N = P.N;
  const double x = P.beta / (N * P.p);
  const double lp = log_phi(x, P.p), lm = log_phi(-x, P.p);
  LogSum acc;
  for (int k = 0; k <= N; ++k) {
    if (g.log_g[k] == kNegInf) continue;
    const double np = k, nm = N - k;
    const double a = 0.5 * np * (np - 1) + 0.5 * nm * (nm - 1);  // pairs with s_i s_j = +1
    const double b = np * nm;                                    // pairs with s_i s_j = -1
    acc.add(g.log_g[k] + log_binom(N, k) + a * lp + b * lm);
  }
  return acc.value();
}

std::uint64_t replica_seed(std::uint64_t master, std::size_t replica) {
  return stream_key(master, StreamTag::Disorder, replica);
}

std::vector<CouplingHistogram> replica_histograms(const ModelParams& P, int replicas, std::uint64_t master,
                                                  std::vector<std::uint64_t>* seeds) {
  P.validate();
  require(replicas >= 1, "need at least one replica");
  std::vector<CouplingHistogram> out(replicas);
  std::vector<std::uint64_t> sd(replicas);
  for (int r = 0; r < replicas; ++r) sd[r] = replica_seed(master, r);
  parallel_for(replicas, [&](std::size_t r) { out[r] = coupling_histogram(Disorder::sample(P, sd[r])); });
  if (seeds) *seeds = std::move(sd);
  return out;
}

namespace {

double sample_variance(const std::vector<double>& y) {
  CompensatedSum s;
  for (double v : y) s.add(v);
  const double mean = s.value() / y.size();
  CompensatedSum q;
  for (double v : y) q.add((v - mean) * (v - mean));
  return q.value() / (y.size() - 1);
}

}  // namespace

ConcentrationReport concentration_from_histograms(const std::vector<CouplingHistogram>& hists,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  const ModelParams& P, const WeightFunction& g, double s,
                                                  const TheoremConstants& consts, std::uint64_t boot_seed,
                                                  DeltaSign sign) {
  const int n = static_cast<int>(hists.size());
  if (n < kMinReplicasForTails)
    fail(Errc::TooFewReplicas, "tail estimation needs at least " + std::to_string(kMinReplicasForTails) +
                                   " replicas, got " + std::to_string(n));
  require(seeds.size() == hists.size(), "one seed per replica is required");
  ConcentrationReport R;
  R.replicas = n;
  R.seeds = seeds;
  R.s = s;
  R.consts = consts;
  const int N = P.N;
  const double log_ref = log_reference_sum(g);

  R.F.resize(n);
  R.log_ratio_to_reference.resize(n);
  for (int r = 0; r < n; ++r) {
    const PartitionStats ps = partition_stats(hists[r], P, g, sign);
    R.F[r] = ps.F;
    R.log_ratio_to_reference[r] = ps.log_Z - log_ref;
  }
  CompensatedSum fs;
  for (double f : R.F) fs.add(f);
  R.p_hat = fs.value() / n;
  R.p_hat_se = std::sqrt(sample_variance(R.F) / n);
  R.Y.resize(n);
  for (int r = 0; r < n; ++r) R.Y[r] = N * (R.F[r] - R.p_hat);
  R.var_Y = sample_variance(R.Y);
  R.ratio = P.beta > 0.0 ? R.var_Y * P.p * P.p / (P.beta * P.beta) : 0.0;
  R.lipschitz = P.beta / (N * P.p * std::sqrt(2.0));

  constexpr int B = 200;
  Rng rng = Rng::stream(boot_seed, StreamTag::Bootstrap, 0);
  std::vector<double> boot(B), y(n);
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < n; ++i) y[i] = R.Y[rng.below(n)];
    boot[b] = sample_variance(y);
  }
  R.var_Y_se = std::sqrt(sample_variance(boot));

  // Rank-based survival of |Y|: S(t) = #{|Y| >= t} / n.
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = std::abs(R.Y[i]);
  std::sort(a.begin(), a.end());
  R.gamma_fit = R.var_Y > 0.0 ? 1.0 / (2.0 * R.var_Y) : std::numeric_limits<double>::infinity();
  R.c_fit = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && a[i] == a[i - 1]) continue;
    const double surv = static_cast<double>(n - i) / n;
    R.tail.push_back({a[i], surv});
    const double env = R.var_Y > 0.0 ? std::exp(R.gamma_fit * a[i] * a[i]) : 1.0;
    R.c_fit = std::max(R.c_fit, surv * env);
  }

  int inside = 0;
  for (double lr : R.log_ratio_to_reference)
    if (lr >= -s + consts.kappa && lr <= s + consts.alpha) ++inside;
  R.coverage = static_cast<double>(inside) / n;
  return R;
}

ConcentrationReport concentration_report(const ModelParams& P, const WeightFunction& g, int replicas,
                                         std::uint64_t master, double s, double c1, double c2,
                                         DeltaSign sign) {
  if (replicas < kMinReplicasForTails)
    fail(Errc::TooFewReplicas, "tail estimation needs at least " + std::to_string(kMinReplicasForTails) + " replicas");
  if (P.N > kMaxStatsN) fail(Errc::NTooLarge, "exact partition sums need N <= " + std::to_string(kMaxStatsN));
  std::vector<std::uint64_t> seeds;
  const auto hists = replica_histograms(P, replicas, master, &seeds);
  return concentration_from_histograms(hists, seeds, P, g, s, constants(P, c1, c2), master, sign);
}

SumQCheck corollary_sumQ_check(const ExactChain& chain, const WeightFunction& gbar, double s,
                               const TheoremConstants& consts) {
  gbar.validate();
  const int N = chain.N();
  require(gbar.N() == N, "weight function has the wrong length");
  const ModelParams& P = chain.params();
  const MesoMeasure Q = meso_measure(chain);
  LogSum lhs, cw, ex;
  for (int k = 0; k <= N; ++k) {
    const double lg = gbar.log_g[k];
    if (lg == kNegInf) continue;
    const double m = 2.0 * k / N - 1.0;
    if (Q.Q[k] > 0.0) lhs.add(lg + std::log(Q.Q[k]));
    cw.add(lg + log_binom(N, k) - P.beta * N * cw_energy_density(m, P.h));
    const double base = lg - P.beta * N * f_beta(m, P.beta, P.h);
    if (k == 0 || k == N)
      ex.add(base);
    else
      ex.add(base + 0.5 * std::log(2.0 / (kPi * N * (1.0 - m * m))));
  }
  SumQCheck out{};
  out.log_lhs = lhs.value();
  out.log_rhs_cw = cw.value() - chain.log_Z();
  out.log_rhs_expanded = ex.value() - chain.log_Z();
  out.log_gap_cw = out.log_lhs - out.log_rhs_cw;
  out.log_gap_expanded = out.log_lhs - out.log_rhs_expanded;
  out.covered = out.log_gap_cw <= s + consts.alpha;
  return out;
}

}  // namespace metastab
