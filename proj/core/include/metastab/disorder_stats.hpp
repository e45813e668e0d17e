#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metastab/disorder.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/params.hpp"

namespace metastab {

struct TheoremConstants {
  double alpha = 0.0;
  double kappa = 0.0;
  double eta_star = 0.0;
  double c1 = 1.0, c2 = 1.0;  // placeholders unless set explicitly
  double C1 = 0.0, C2 = 0.0;
};

// kappa_eta - alpha = log eta - beta sqrt(2 alpha + log(c1/(1-eta)^2)) / (p sqrt(2 c2)).
// Returns -inf where the square root is undefined.
double kappa_objective(double eta, const ModelParams& params, double c1, double c2);

TheoremConstants constants(const ModelParams& params, double c1 = 1.0, double c2 = 1.0);

// Nonnegative weights over levels k = 0..N, stored as logs (-inf for zero weight).
struct WeightFunction {
  std::vector<double> log_g;

  int N() const { return static_cast<int>(log_g.size()) - 1; }
  static WeightFunction uniform(int N);
  // Indicator of levels [k_lo, k_hi].
  static WeightFunction indicator(int N, int k_lo, int k_hi);
  static WeightFunction from_values(const std::vector<double>& g);
  void validate() const;
};

// Parse "uniform" or "indicator:a,b" (a, b magnetisations, snapped to the grid).
WeightFunction parse_weight(const std::string& spec, int N);

enum class DeltaSign { Minus, Plus };  // e^{-beta Delta} or e^{+beta Delta}

// Counts of configurations by (level k, S_J = sum_{i<j} J_ij s_i s_j). Does not depend on beta or h.
struct CouplingHistogram {
  int N = 0;
  int max_pairs = 0;                 // S_J ranges over [-max_pairs, max_pairs]
  std::vector<std::uint32_t> count;  // index k * (2 max_pairs + 1) + S_J + max_pairs

  std::uint32_t at(int k, int sj) const {
    return count[static_cast<std::size_t>(k) * (2 * max_pairs + 1) + (sj + max_pairs)];
  }
};

inline constexpr int kMaxStatsN = 22;

CouplingHistogram coupling_histogram(const Disorder& J);

struct PartitionStats {
  double log_Z;  // log Z_{N,g}
  double F;      // log Z / N
};

PartitionStats partition_stats(const CouplingHistogram& hist, const ModelParams& params,
                               const WeightFunction& g, DeltaSign sign = DeltaSign::Minus);
PartitionStats partition_stats(const Disorder& J, const ModelParams& params, const WeightFunction& g,
                               DeltaSign sign = DeltaSign::Minus);
// Reference path: explicit pair sums for every configuration.
PartitionStats partition_stats_slow(const Disorder& J, const ModelParams& params,
                                    const WeightFunction& g, DeltaSign sign = DeltaSign::Minus);

// log sum_m g(m) exp(-N I_N(m)) = log sum_k g_k binom(N,k).
double log_reference_sum(const WeightFunction& g);

// log Phi(x), Phi(x) = p e^{x(1-p)} + (1-p) e^{-x p}.
double log_phi(double x, double p);

double exact_first_moment(const ModelParams& params, const WeightFunction& g);

struct TailPoint {
  double t;
  double survival;  // fraction of |Y| >= t
};

struct ConcentrationReport {
  int replicas = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> F;
  std::vector<double> Y;
  double p_hat = 0.0, p_hat_se = 0.0;
  double var_Y = 0.0, var_Y_se = 0.0;  // standard error by bootstrap
  double ratio = 0.0;                  // var_Y p^2 / beta^2
  double lipschitz = 0.0;              // beta / (N p sqrt 2)
  double gamma_fit = 0.0;              // 1 / (2 var_Y)
  double c_fit = 0.0;                  // smallest c with S(t) <= c e^{-gamma t^2} at every sample
  std::vector<TailPoint> tail;
  double s = 0.0;
  double coverage = 0.0;  // frequency of e^{-s+kappa} <= Z / sum g e^{-N I_N} <= e^{s+alpha}
  std::vector<double> log_ratio_to_reference;
  TheoremConstants consts;
};

inline constexpr int kMinReplicasForTails = 100;

std::uint64_t replica_seed(std::uint64_t master, std::size_t replica);

// Histograms for replicas 0..n-1 with disorder seeds replica_seed(master, r).
std::vector<CouplingHistogram> replica_histograms(const ModelParams& params, int replicas,
                                                  std::uint64_t master_seed,
                                                  std::vector<std::uint64_t>* seeds = nullptr);

ConcentrationReport concentration_from_histograms(const std::vector<CouplingHistogram>& hists,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  const ModelParams& params, const WeightFunction& g,
                                                  double s, const TheoremConstants& consts,
                                                  std::uint64_t bootstrap_seed,
                                                  DeltaSign sign = DeltaSign::Minus);

ConcentrationReport concentration_report(const ModelParams& params, const WeightFunction& g,
                                         int replicas, std::uint64_t master_seed, double s,
                                         double c1 = 1.0, double c2 = 1.0,
                                         DeltaSign sign = DeltaSign::Minus);

struct SumQCheck {
  double log_lhs;              // log sum gbar Q
  double log_rhs_cw;           // log[(Ztilde/Z) sum gbar Qtilde]
  double log_rhs_expanded;     // log[(1/Z) sum gbar e^{-beta N f_beta} sqrt(2/(pi N (1-m^2)))], plain at m = +-1
  double log_gap_cw;           // log_lhs - log_rhs_cw; equals -beta/2 at p = 1
  double log_gap_expanded;
  bool covered;                // log_gap_cw <= s + alpha
};

SumQCheck corollary_sumQ_check(const ExactChain& chain, const WeightFunction& gbar, double s,
                               const TheoremConstants& consts);

}  // namespace metastab
