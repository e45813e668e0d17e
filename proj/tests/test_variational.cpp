#include <gtest/gtest.h>

#include <cmath>

#include "metastab/cw_chain.hpp"
#include "metastab/error.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/landscape.hpp"
#include "metastab/variational.hpp"

using namespace metastab;

TEST(Dirichlet, UpperBoundsAndExactAtCurieWeiss) {
  const ModelParams P1{12, 1.5, 0.2, 1.0};
  const ExactChain X(Disorder::sample(P1, 1), P1);
  const LumpedChain ch = build_lumped_chain(12, 1.5, 0.2);
  const double cap = capacity_exact(X, harmonic_function(X, 2, 10)).log_cap;
  const auto v = cw_equilibrium_potential(ch, 2, 10);
  EXPECT_NEAR(dirichlet_upper(X, 2, 10, v), cap, 1e-10);

  std::vector<double> step(13, 0.0);
  for (int k = 0; k <= 5; ++k) step[k] = 1.0;
  EXPECT_GE(dirichlet_upper(X, 2, 10, step), cap);

  auto bad = v;
  bad[2] = 0.9;
  EXPECT_THROW(dirichlet_upper(X, 2, 10, bad), Error);
  bad = v;
  bad[5] = 1.5;
  EXPECT_THROW(dirichlet_upper(X, 2, 10, bad), Error);
}

TEST(Flow, UnitFlowFullResolution) {
  for (int N : {8, 10, 12, 14})
    for (auto [a, b] : {std::pair{0, N}, std::pair{1, N - 2}, std::pair{N / 2 - 1, N / 2 + 1}}) {
      const MagFlow f = unit_flow(N, a, b);
      const FlowReport r = validate_flow(f, true);
      EXPECT_TRUE(r.ok) << N << " " << a << " " << b;
      EXPECT_LE(r.antisymmetry_error, 1e-12);
      EXPECT_LE(r.divergence_error, 1e-12);
      EXPECT_NEAR(r.flux_out, 1.0, 1e-12);
      EXPECT_NEAR(r.flux_in, 1.0, 1e-12);
      // Antisymmetry identity k binom(N,k) = (N-k+1) binom(N,k-1) seen through the flow values.
      for (int k = a + 1; k <= b; ++k) EXPECT_LT(std::abs(f.value(k, k - 1) / f.value(k - 1, k) + 1.0), 1e-12);
    }
  EXPECT_THROW(unit_flow(10, 5, 5), Error);
  EXPECT_THROW(unit_flow(10, 6, 2), Error);
}

TEST(Flow, ScaledFlowRejected) {
  const ModelParams P{10, 1.5, 0.1, 0.5};
  const ExactChain X(Disorder::sample(P, 2), P);
  const MagFlow f = unit_flow(10, 1, 9).scaled(2.0);
  EXPECT_FALSE(validate_flow(f, true).ok);
  EXPECT_NEAR(validate_flow(f, false).flux_out, 2.0, 1e-12);
  try {
    thomson_lower(X, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidFlow);
  }
}

TEST(Thomson, LowerBoundAtCurieWeiss) {
  const ModelParams P{12, 1.5, 0.2, 1.0};
  const ExactChain X(Disorder::sample(P, 3), P);
  const double cap = capacity_exact(X, harmonic_function(X, 2, 10)).log_cap;
  const double lo = thomson_lower(X, unit_flow(12, 2, 10));
  EXPECT_LE(lo, cap + 1e-10);
  EXPECT_TRUE(std::isfinite(cap - lo));
}

TEST(Sandwich, HundredReplicas) {
  const ModelParams P{12, 1.5, 0.2, 0.5};
  const LumpedChain ch = build_lumped_chain(12, 1.5, 0.2);
  const auto v = cw_equilibrium_potential(ch, 2, 10);
  const MagFlow f = unit_flow(12, 2, 10);
  for (int r = 0; r < 100; ++r) {
    const ExactChain X(Disorder::sample(P, 500 + r), P);
    const double cap = capacity_exact(X, harmonic_function(X, 2, 10)).log_cap;
    EXPECT_LE(thomson_lower(X, f), cap + 1e-10);
    EXPECT_LE(cap, dirichlet_upper(X, 2, 10, v) + 1e-10);
  }
}

TEST(Lemma32, SupportAndCurieWeiss) {
  const ModelParams P{10, 1.5, 0.1, 1.0};
  const Disorder J = Disorder::sample(P, 4);
  const SpinConfig s = SpinConfig::from_mask(0b0001101101, 10);
  const int k = s.up_count();
  for (int kp : {k - 2, k, k + 3}) {
    const auto r = lemma32_check(J, P, s, kp);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_TRUE(r.ok);
  }
  // At p = 1 every summand is exp(0) = 1.
  EXPECT_EQ(lemma32_check(J, P, s, k + 1).lhs, 10.0 - k);
  EXPECT_EQ(lemma32_check(J, P, s, k - 1).lhs, k);
  EXPECT_TRUE(lemma32_check(J, P, s, k + 1).ok);
}

TEST(Lemma32, ExhaustiveHalfDensity) {
  const ModelParams P{10, 1.5, 0.1, 0.5};
  for (int r = 0; r < 50; ++r) {
    const Disorder J = Disorder::sample(P, 700 + r);
    for (std::uint32_t m = 0; m < (1u << 10); ++m) {
      const SpinConfig s = SpinConfig::from_mask(m, 10);
      const int k = s.up_count();
      for (int kp : {k - 1, k + 1}) {
        if (kp < 0 || kp > 10) continue;
        ASSERT_TRUE(lemma32_check(J, P, s, kp).ok) << "replica " << r << " state " << m;
      }
    }
  }
}

TEST(Lemma32, SparseEnvelope) {
  // Each ratio term is at most exp(beta |dH - dH_cw|) <= exp(2 beta (N-1) max(p,1-p) / (N p)).
  const ModelParams P{10, 1.5, 0.1, 0.2};
  const double cap = std::exp(2.0 * P.beta * (P.N - 1) * std::max(P.p, 1 - P.p) / (P.N * P.p));
  for (int r = 0; r < 10; ++r) {
    const Disorder J = Disorder::sample(P, 900 + r);
    for (std::uint32_t m = 0; m < (1u << 10); m += 3) {
      const SpinConfig s = SpinConfig::from_mask(m, 10);
      const int k = s.up_count();
      if (k < 10) ASSERT_LE(lemma32_check(J, P, s, k + 1).lhs, (10 - k) * cap * (1 + 1e-12));
      if (k > 0) ASSERT_LE(lemma32_check(J, P, s, k - 1).lhs, k * cap * (1 + 1e-12));
    }
  }
}

TEST(Superharmonic, LumpedLargeN) {
  const Landscape L = critical_points(1.5, 0.1);
  const WellDecomposition W = well_decomposition(L, 2000, 0.01, 0.005);
  const auto r = superharmonic_lumped(L, W, 0.1);
  ASSERT_FALSE(r.value.empty());
  EXPECT_EQ(r.violations, 0);
  for (double v : r.value) EXPECT_LT(v, 0.0);
  for (std::size_t i = 0; i < r.m.size(); ++i)
    if (r.m[i] > L.m_star && r.m[i] + 2.0 / 2000 < L.m_plus) EXPECT_LT(r.g[i], 0.0);
  EXPECT_THROW(superharmonic_lumped(L, W, 0.0), Error);
  EXPECT_THROW(superharmonic_lumped(L, W, 1.0), Error);
}

TEST(Superharmonic, FullSmallN) {
  const ModelParams P{12, 1.5, 0.1, 0.5};
  const Landscape L = critical_points(P.beta, P.h);
  const double dmax = std::min(f_beta(-1.0, P.beta, P.h), L.f_star) - L.f_minus;
  const double delta = 0.9 * dmax;
  const WellDecomposition W = well_decomposition(L, 12, delta, 0.9 * (L.f_minus + delta - L.f_plus));
  const ExactChain X(Disorder::sample(P, 5), P);
  const auto full = superharmonic_full(X, L, W, 0.1);
  EXPECT_EQ(static_cast<int>(full.levels.size()), W.k_epsN - W.k_deltaN);
  for (double v : full.value) EXPECT_TRUE(std::isfinite(v));
  // At p = 1 the full generator acting on a level function is the lumped generator.
  const ModelParams P1{12, 1.5, 0.1, 1.0};
  const ExactChain X1(Disorder::sample(P1, 5), P1);
  const auto f1 = superharmonic_full(X1, L, W, 0.1);
  for (std::size_t i = 0; i < f1.levels.size(); ++i) {
    const int k = f1.levels[i];
    const LumpedChain ch = build_lumped_chain(12, 1.5, 0.1);
    auto fk = [&](int j) { return f_beta(2.0 * j / 12 - 1, 1.5, 0.1); };
    const double ref = ch.r_up[k] * std::expm1(1.5 * 12 * 0.9 * (fk(k + 1) - fk(k))) +
                       ch.r_down[k] * std::expm1(1.5 * 12 * 0.9 * (fk(k - 1) - fk(k)));
    EXPECT_NEAR(f1.value[i], ref, 1e-12);
  }
}
