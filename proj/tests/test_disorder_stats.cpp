#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "metastab/disorder_stats.hpp"
#include "metastab/error.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/numeric.hpp"
#include "oracles.hpp"

using namespace metastab;

namespace {

// log sum_s g(k(s)) exp(sign * beta (S_J - p S) / (N p)) by explicit pair sums.
double oracle_log_Z(const Disorder& J, const ModelParams& P, const std::vector<double>& g, double sign) {
  const auto a = oracle::dense_J(J);
  const int N = P.N;
  std::vector<double> terms;
  for (std::uint32_t s = 0; s < (1u << N); ++s) {
    const double gk = g[oracle::popcount(s)];
    if (gk == 0.0) continue;
    double sj = 0.0, sc = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        const int x = oracle::spin(s, i) * oracle::spin(s, j);
        sj += a[i][j] * x;
        sc += x;
      }
    terms.push_back(std::log(gk) + sign * P.beta * (sj - P.p * sc) / (N * P.p));
  }
  const double mx = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - mx);
  return mx + std::log(acc);
}

double oracle_first_moment(const ModelParams& P) {
  const int N = P.N;
  const double x = P.beta / (N * P.p);
  auto psi = [&](double y) { return P.p * std::exp(y * x * (1 - P.p)) + (1 - P.p) * std::exp(-y * x * P.p); };
  double z = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double a = 0.5 * k * (k - 1) + 0.5 * (N - k) * (N - k - 1), b = double(k) * (N - k);
    z += std::exp(std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0)) *
         std::pow(psi(1), a) * std::pow(psi(-1), b);
  }
  return std::log(z);
}

}  // namespace

TEST(Constants, AlphaExamples) {
  EXPECT_DOUBLE_EQ(constants({10, 2.0, 0.0, 0.5}).alpha, 1.0);
  const auto c = constants({10, 1.5, 0.0, 1.0});
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_LT(c.kappa, 0.0);
}

TEST(Constants, KappaMatchesGridScan) {
  for (double beta : {0.5, 1.5, 3.0})
    for (double p : {0.2, 0.5, 0.9})
      for (double c1 : {1.0, 2.0}) {
        const ModelParams P{10, beta, 0.0, p};
        const auto c = constants(P, c1, 1.0);
        double best = -INFINITY;
        const int n = 1000000;
        for (int i = 1; i < n; ++i) best = std::max(best, kappa_objective(double(i) / n, P, c1, 1.0));
        EXPECT_NEAR(c.kappa, c.alpha + best, 1e-8) << beta << " " << p << " " << c1;
        EXPECT_GE(c.kappa, c.alpha + best - 1e-12);
        EXPECT_NEAR(kappa_objective(c.eta_star, P, c1, 1.0) + c.alpha, c.kappa, 1e-12);
      }
}

TEST(Constants, KappaBelowAlphaOnGrid) {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (double c1 : {0.5, 1.0, 3.0})
        for (double c2 : {0.5, 1.0, 3.0}) {
          const ModelParams P{10, 0.1 + 0.4 * i, 0.1, 0.05 + 0.1 * j};
          const auto c = constants(P, c1, c2);
          EXPECT_LT(c.kappa, c.alpha);
          EXPECT_LT(c.C1, c.C2);
          EXPECT_NEAR(std::log(c.C2), 2 * P.beta * (1 + P.h) + 2 * c.alpha, 1e-12);
        }
}

TEST(PartitionStats, CurieWeissIdentity) {
  const ModelParams P{12, 1.5, 0.1, 1.0};
  const auto J = Disorder::sample(P, 3);
  for (auto g : {WeightFunction::uniform(12), WeightFunction::indicator(12, 3, 7)})
    EXPECT_NEAR(partition_stats(J, P, g).log_Z, log_reference_sum(g), 1e-12);
}

TEST(PartitionStats, InfiniteTemperature) {
  const ModelParams P{14, 0.0, 0.0, 0.3};
  const auto r = partition_stats(Disorder::sample(P, 4), P, WeightFunction::uniform(14));
  EXPECT_NEAR(r.log_Z, 14 * std::log(2.0), 1e-12);
  EXPECT_NEAR(r.F, std::log(2.0), 1e-12);
}

TEST(PartitionStats, FastMatchesOracles) {
  for (int N : {4, 8, 12}) {
    const ModelParams P{N, 1.3, 0.0, 0.4};
    const auto J = Disorder::sample(P, 10 + N);
    std::vector<double> g(N + 1);
    for (int k = 0; k <= N; ++k) g[k] = (k % 3 == 0) ? 0.0 : 0.5 + k;
    const auto w = WeightFunction::from_values(g);
    for (auto [sign, sg] : {std::pair{DeltaSign::Minus, 1.0}, std::pair{DeltaSign::Plus, -1.0}}) {
      const double fast = partition_stats(J, P, w, sign).log_Z;
      EXPECT_NEAR(fast, oracle_log_Z(J, P, g, sg), 1e-10);
      EXPECT_NEAR(fast, partition_stats_slow(J, P, w, sign).log_Z, 1e-10);
    }
  }
  const ModelParams P{16, 2.0, 0.0, 0.5};
  const auto J = Disorder::sample(P, 99);
  const auto u = WeightFunction::uniform(16);
  EXPECT_NEAR(partition_stats(J, P, u).log_Z, partition_stats_slow(J, P, u).log_Z, 1e-10);
}

TEST(PartitionStats, HistogramIsTemperatureFree) {
  const ModelParams P{10, 1.0, 0.0, 0.5};
  const auto J = Disorder::sample(P, 5);
  const auto H = coupling_histogram(J);
  std::uint64_t total = 0;
  for (auto c : H.count) total += c;
  EXPECT_EQ(total, 1u << 10);
  for (double beta : {0.3, 2.0}) {
    ModelParams Q = P;
    Q.beta = beta;
    EXPECT_NEAR(partition_stats(H, Q, WeightFunction::uniform(10)).log_Z,
                partition_stats_slow(J, Q, WeightFunction::uniform(10)).log_Z, 1e-10);
  }
  EXPECT_THROW(coupling_histogram(Disorder::sample({23, 1.0, 0.0, 0.5}, 1)), Error);
}

TEST(FirstMoment, LogPhiStable) {
  for (double p : {0.1, 0.5, 0.9})
    for (double x : {-3.0, -1e-6, 0.0, 1e-6, 2.0})
      EXPECT_NEAR(log_phi(x, p), std::log(p * std::exp(x * (1 - p)) + (1 - p) * std::exp(-x * p)), 1e-14);
  EXPECT_EQ(log_phi(5.0, 1.0), 0.0);
  EXPECT_NEAR(log_phi(1e-9, 0.3), 0.5 * 0.21 * 1e-18, 1e-25);
}

TEST(FirstMoment, ClosedFormOracle) {
  for (double p : {0.2, 0.5, 0.8}) {
    const ModelParams P{14, 1.5, 0.0, p};
    EXPECT_NEAR(exact_first_moment(P, WeightFunction::uniform(14)), oracle_first_moment(P), 1e-10);
  }
  const ModelParams P1{14, 1.5, 0.0, 1.0 - 1e-8};
  EXPECT_NEAR(exact_first_moment(P1, WeightFunction::uniform(14)), 14 * std::log(2.0), 1e-6);
}

TEST(FirstMoment, MonteCarloMean) {
  const ModelParams P{14, 1.5, 0.0, 0.5};
  const auto u = WeightFunction::uniform(14);
  const int R = 10000;
  const auto hists = replica_histograms(P, R, 77);
  const double ref = exact_first_moment(P, u);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& H : hists) {
    const double z = std::exp(partition_stats(H, P, u).log_Z - ref);
    s1 += z;
    s2 += z * z;
  }
  const double mean = s1 / R, se = std::sqrt((s2 / R - mean * mean) / R);
  EXPECT_LT(std::abs(mean - 1.0), 4 * se) << mean << " +- " << se;
}

TEST(FirstMoment, ApproachesAlpha) {
  for (double p : {0.3, 0.6}) {
    const ModelParams P{64, 1.5, 0.0, p};
    const double alpha = constants(P).alpha;
    double prev = INFINITY;
    for (int N : {64, 128, 256}) {
      ModelParams Q = P;
      Q.N = N;
      const auto u = WeightFunction::uniform(N);
      const double gap = std::abs(exact_first_moment(Q, u) - log_reference_sum(u) - alpha);
      EXPECT_LT(gap, prev);
      prev = gap;
    }
    EXPECT_LT(prev, 0.05);
  }
}

TEST(Concentration, CurieWeissDegenerate) {
  const ModelParams P{8, 1.5, 0.0, 1.0};
  const auto r = concentration_report(P, WeightFunction::uniform(8), 100, 3, 3.0);
  for (double y : r.Y) EXPECT_NEAR(y, 0.0, 1e-12);
  EXPECT_EQ(r.replicas, 100);
  EXPECT_DOUBLE_EQ(r.coverage, 1.0);
}

TEST(Concentration, ReportFields) {
  const ModelParams P{10, 1.5, 0.0, 0.5};
  const auto r = concentration_report(P, WeightFunction::uniform(10), 120, 9, 3.0);
  ASSERT_EQ(r.F.size(), 120u);
  const double mean = std::accumulate(r.F.begin(), r.F.end(), 0.0) / 120;
  for (std::size_t i = 0; i < r.F.size(); ++i) EXPECT_NEAR(r.Y[i], 10 * (r.F[i] - mean), 1e-12);
  EXPECT_GT(r.var_Y, 0.0);
  EXPECT_NEAR(r.gamma_fit, 1.0 / (2 * r.var_Y), 1e-12);
  EXPECT_NEAR(r.ratio, r.var_Y * 0.25 / (1.5 * 1.5), 1e-12);
  EXPECT_GE(r.c_fit, 1.0 - 1e-12);
  EXPECT_TRUE(r.var_Y_se > 0.0);
  EXPECT_THROW(concentration_report(P, WeightFunction::uniform(10), 99, 9, 3.0), Error);
}

TEST(Concentration, Deterministic) {
  const ModelParams P{8, 1.0, 0.0, 0.4};
  const auto a = concentration_report(P, WeightFunction::uniform(8), 100, 11, 2.0);
  const auto b = concentration_report(P, WeightFunction::uniform(8), 100, 11, 2.0);
  EXPECT_EQ(a.F, b.F);
  EXPECT_EQ(a.var_Y_se, b.var_Y_se);
  EXPECT_EQ(a.seeds, b.seeds);
}

TEST(SumQ, CurieWeissGap) {
  for (double beta : {0.5, 1.5}) {
    const ModelParams P{10, beta, 0.1, 1.0};
    const ExactChain X(Disorder::sample(P, 1), P);
    const auto c = corollary_sumQ_check(X, WeightFunction::uniform(10), 1.0, constants(P));
    EXPECT_NEAR(c.log_gap_cw, -beta / 2, 1e-10);
    EXPECT_NEAR(c.log_lhs, 0.0, 1e-12);
    EXPECT_TRUE(c.covered);
  }
}

TEST(WeightFunction, Parsing) {
  const auto u = parse_weight("uniform", 6);
  EXPECT_EQ(u.N(), 6);
  for (double v : u.log_g) EXPECT_EQ(v, 0.0);
  const auto ind = parse_weight("indicator:-0.34,0.34", 6);  // levels 2..4
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(std::isinf(ind.log_g[k]), k < 2 || k > 4) << k;
  EXPECT_THROW(parse_weight("indicator:0.5,-0.5", 6), Error);
  EXPECT_THROW(parse_weight("indicator:0.5", 6), Error);
  EXPECT_THROW(parse_weight("gauss", 6), Error);
  EXPECT_THROW(WeightFunction::from_values({1.0, -1.0}), Error);
  EXPECT_THROW(WeightFunction::from_values({0.0, 0.0}), Error);
}
