#include <gtest/gtest.h>

#include <cmath>

#include "metastab/cw_chain.hpp"
#include "metastab/error.hpp"
#include "metastab/numeric.hpp"
#include "oracles.hpp"

using namespace metastab;

TEST(LumpedChain, HandRate) {
  const LumpedChain ch = build_lumped_chain(2, 1.0, 0.0);
  EXPECT_NEAR(ch.r_up[0], std::exp(-1.0), 1e-15);
  EXPECT_EQ(ch.r_up[2], 0.0);
  EXPECT_EQ(ch.r_down[0], 0.0);
}

TEST(LumpedChain, DetailedBalanceAndNormalisation) {
  for (int N : {5, 50, 500, 5000})
    for (double h : {0.0, 0.1, -0.3}) {
      const LumpedChain ch = build_lumped_chain(N, 1.5, h);
      LogSum tot;
      for (int k = 0; k <= N; ++k) {
        tot.add(ch.log_Q(k));
        ASSERT_GE(ch.r_hold(k), -1e-15);
        if (k < N) {
          const double lhs = ch.log_w[k] + std::log(ch.r_up[k]);
          const double rhs = ch.log_w[k + 1] + std::log(ch.r_down[k + 1]);
          ASSERT_LT(std::abs(std::expm1(lhs - rhs)), 1e-12);
        }
      }
      EXPECT_EQ(ch.r_up[N], 0.0);
      EXPECT_NEAR(tot.value(), 0.0, 1e-12);
    }
}

TEST(LumpedChain, WeightsMatchDirectFormula) {
  for (int N : {12, 5000}) {
    const LumpedChain ch = build_lumped_chain(N, 1.5, 0.1);
    for (int k = 0; k <= N; k += std::max(1, N / 50)) {
      const double m = 2.0 * k / N - 1.0;
      const double direct = std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) +
                            1.5 * N * (0.5 * m * m + 0.1 * m);
      EXPECT_NEAR(ch.log_w[k], direct, 1e-12 * (1 + std::abs(direct)) + 1e-9) << N << " " << k;
    }
  }
}

TEST(LumpedChain, CapacitySymmetric) {
  const LumpedChain ch = build_lumped_chain(40, 1.5, 0.1);
  for (auto [a, b] : {std::pair{3, 30}, std::pair{10, 11}, std::pair{0, 40}}) {
    const auto x = cw_capacity(ch, a, b), y = cw_capacity(ch, b, a);
    EXPECT_LT(std::abs(x.cap_exact / y.cap_exact - 1.0), 1e-12);
  }
  EXPECT_THROW(cw_capacity(ch, 4, 4), Error);
}

TEST(LumpedChain, EquilibriumPotentialIsOptimal) {
  const LumpedChain ch = build_lumped_chain(60, 1.5, 0.1);
  const int a = 8, b = 55;
  const auto v = cw_equilibrium_potential(ch, a, b);
  EXPECT_EQ(v[a], 1.0);
  EXPECT_EQ(v[b], 0.0);
  for (int k = 0; k < 60; ++k) EXPECT_GE(v[k], v[k + 1]);
  const double cap = cw_capacity(ch, a, b).cap_exact;
  EXPECT_LT(std::abs(lumped_dirichlet_form(ch, v) / cap - 1.0), 1e-12);
  // Any other admissible function does worse.
  std::vector<double> w(61, 0.0);
  for (int k = 0; k <= 60; ++k) w[k] = k <= a ? 1.0 : k >= b ? 0.0 : 1.0 - double(k - a) / (b - a);
  EXPECT_GT(lumped_dirichlet_form(ch, w), cap);
}

TEST(LumpedChain, EhrenfestHittingTime) {
  // beta = 0, N = 3: up (N-k)/N, down k/N. Dense first-passage oracle from k = 0 to k = 3.
  const LumpedChain ch = build_lumped_chain(3, 0.0, 0.0);
  std::vector<std::vector<double>> T(4, std::vector<double>(4, 0.0));
  for (int k = 0; k <= 3; ++k) {
    if (k < 3) T[k][k + 1] = (3.0 - k) / 3.0;
    if (k > 0) T[k][k - 1] = k / 3.0;
  }
  const auto tau = oracle::hitting(T, {0, 0, 0, 1});
  EXPECT_NEAR(cw_mean_hitting(ch, 0, 3).exact, tau[0], 1e-12);
  EXPECT_NEAR(std::exp(cw_mean_hitting_tridiagonal_log(ch, 0, 3)), tau[0], 1e-12);
  EXPECT_NEAR(tau[0], 10.0, 1e-12);  // by hand: E2 = 7, E1 = 9, E0 = 10
}

TEST(LumpedChain, ClosedFormMatchesTridiagonal) {
  for (int N : {10, 100, 1000, 10000}) {
    const LumpedChain ch = build_lumped_chain(N, 1.5, 0.1);
    const auto g = critical_points(1.5, 0.1).on_grid(N);
    const auto a = cw_mean_hitting(ch, g.k_minus, g.k_plus);
    const double t = cw_mean_hitting_tridiagonal_log(ch, g.k_minus, g.k_plus);
    EXPECT_LT(std::abs(std::expm1(a.log_exact - t)), 1e-10) << N;
  }
}

TEST(LumpedChain, EyringKramersConvergence) {
  const Landscape L = critical_points(1.5, 0.1);
  double prev_tau = 1e9, prev_cap = 1e9;
  for (int N : {500, 1000, 2000, 4000, 8000}) {
    const LumpedChain ch = build_lumped_chain(N, 1.5, 0.1);
    const auto g = L.on_grid(N);
    const auto hit = cw_mean_hitting(ch, g.k_minus, g.k_plus);
    const auto cap = cw_capacity(ch, g.k_minus, g.k_plus);
    ASSERT_TRUE(hit.log_eyring_kramers && cap.log_cap_asymptotic);
    const double et = std::abs(std::expm1(hit.log_exact - *hit.log_eyring_kramers));
    const double ec = std::abs(std::expm1(cap.log_cap_exact - *cap.log_cap_asymptotic));
    EXPECT_LT(et, prev_tau) << N;
    EXPECT_LT(ec, prev_cap) << N;
    prev_tau = et;
    prev_cap = ec;
    if (N == 2000) EXPECT_LT(et, 0.05);
    if (N == 4000) EXPECT_LT(ec, 0.02);
  }
}

TEST(LumpedChain, AsymptoticsAbsentWithoutWell) {
  const LumpedChain ch = build_lumped_chain(12, 1.5, 0.2);
  const auto hit = cw_mean_hitting(ch, 2, 10);
  EXPECT_FALSE(hit.log_eyring_kramers.has_value());
  EXPECT_GT(hit.exact, 0.0);
}
