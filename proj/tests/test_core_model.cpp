#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "metastab/disorder.hpp"
#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/numeric.hpp"
#include "metastab/rng.hpp"
#include "metastab/spin.hpp"
#include "oracles.hpp"

using namespace metastab;

namespace {

SpinConfig random_config(int n, Rng& rng) {
  std::vector<int> s(n);
  for (auto& x : s) x = rng.below(2) ? 1 : -1;
  return SpinConfig::from_spins(s);
}

}  // namespace

TEST(Params, Validation) {
  ModelParams P;
  EXPECT_NO_THROW(P.validate());
  P.N = 1;
  EXPECT_THROW(P.validate(), Error);
  P = {};
  P.p = 0.0;
  EXPECT_THROW(P.validate(), Error);
  P.p = 1.2;
  EXPECT_THROW(P.validate(), Error);
  P = {};
  P.beta = -0.1;
  EXPECT_THROW(P.validate(), Error);
  P.beta = 0.0;
  EXPECT_NO_THROW(P.validate());
  P.h = std::nan("");
  EXPECT_THROW(P.validate(), Error);
}

TEST(Numeric, LogHelpers) {
  EXPECT_NEAR(log_binom(10, 3), std::log(120.0), 1e-12);
  EXPECT_NEAR(log_factorial(5), std::log(120.0), 1e-12);
  EXPECT_EQ(xlogx(0.0), 0.0);
  EXPECT_NEAR(log_add(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_EQ(log_add(kNegInf, 1.0), 1.0);
  std::vector<double> xs = {1000.0, 1000.0};
  EXPECT_NEAR(logsumexp(xs), 1000.0 + std::log(2.0), 1e-12);
  LogSum s;
  for (int i = 0; i < 10; ++i) s.add(-800.0 + i);
  double ref = 0.0;
  for (int i = 0; i < 10; ++i) ref += std::exp(i - 9.0);
  EXPECT_NEAR(s.value(), -791.0 + std::log(ref), 1e-12);
  CompensatedSum c;
  c.add(1.0);
  for (int i = 0; i < 1000; ++i) c.add(1e-16);
  EXPECT_NEAR(c.value(), 1.0 + 1e-13, 1e-16);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, StreamTag::Dynamics, 3, 7), b = Rng::stream(42, StreamTag::Dynamics, 3, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  std::set<std::uint64_t> keys;
  for (auto tag : {StreamTag::Disorder, StreamTag::Dynamics, StreamTag::Sampling, StreamTag::Bootstrap})
    for (std::uint64_t r = 0; r < 50; ++r)
      for (std::uint64_t s = 0; s < 20; ++s) keys.insert(stream_key(1, tag, r, s));
  EXPECT_EQ(keys.size(), 4u * 50 * 20);
}

TEST(Rng, BelowIsUniform) {
  Rng r(9);
  std::vector<int> c(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto x = r.below(7);
    ASSERT_LT(x, 7u);
    ++c[x];
  }
  double chi2 = 0.0;
  for (int x : c) chi2 += (x - n / 7.0) * (x - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 30.0);  // 6 dof
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Spin, MagnetizationExamples) {
  EXPECT_EQ(magnetization(SpinConfig::all_plus(10)), 1.0);
  EXPECT_EQ(magnetization(SpinConfig::all_minus(10)), -1.0);
  const std::vector<int> s = {1, 1, -1, -1};
  EXPECT_EQ(magnetization(SpinConfig::from_spins(s)), 0.0);
  EXPECT_THROW(SpinConfig::from_spins(std::vector<int>{1, 0}), Error);
}

TEST(Spin, CachedSumMatchesRecountAcrossWords) {
  Rng rng(5);
  SpinConfig s = random_config(150, rng);
  for (int t = 0; t < 5000; ++t) {
    s.flip(static_cast<int>(rng.below(150)));
    ASSERT_EQ(s.spin_sum(), s.recount());
  }
  s.set(3, 1);
  s.set(3, -1);
  EXPECT_EQ(s.spin(3), -1);
  EXPECT_EQ(s.spin_sum(), s.recount());
  const SpinConfig m = SpinConfig::from_mask(0b1011, 5);
  EXPECT_EQ(m.up_count(), 3);
  EXPECT_EQ(m.mask(), 0b1011u);
}

TEST(Disorder, SymmetricZeroDiagonalAndDeterministic) {
  ModelParams P{30, 1.0, 0.0, 0.4};
  const Disorder J = Disorder::sample(P, 11);
  std::uint64_t edges = 0;
  for (int i = 0; i < 30; ++i) {
    EXPECT_FALSE(J.coupled(i, i));
    for (int j = 0; j < 30; ++j) EXPECT_EQ(J.coupled(i, j), J.coupled(j, i));
    for (int j = i + 1; j < 30; ++j) edges += J.coupled(i, j);
  }
  EXPECT_EQ(edges, J.edge_count());
  EXPECT_EQ(J, Disorder::sample(P, 11));
  EXPECT_NE(J.packed(), Disorder::sample(P, 12).packed());
  const auto rows = J.row_masks();
  const auto dense = J.dense_rows();
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(rows[i], dense[i * J.row_words()]);
    for (int j = 0; j < 30; ++j) EXPECT_EQ(((rows[i] >> j) & 1u) != 0, J.coupled(i, j));
    EXPECT_EQ(J.degree(i), __builtin_popcountll(rows[i]));
  }
}

TEST(Disorder, SpecExamples) {
  const Disorder full = Disorder::sample(ModelParams{3, 1.0, 0.0, 1.0}, 99);
  EXPECT_EQ(full.edge_count(), 3u);
  const Disorder empty = Disorder::sample(ModelParams{3, 1.0, 0.0, 1e-9}, 99);
  EXPECT_EQ(empty.edge_count(), 0u);
  // Binomial(19900, 1/2): sd = sqrt(19900)/2.
  const Disorder big = Disorder::sample(ModelParams{200, 1.0, 0.0, 0.5}, 7);
  EXPECT_LT(std::abs(static_cast<double>(big.edge_count()) - 9950.0), 4.0 * std::sqrt(19900.0) / 2.0);
}

TEST(Disorder, BinaryRoundTrip) {
  const Disorder J = Disorder::sample(ModelParams{37, 1.0, 0.0, 0.3}, 5);
  std::stringstream ss;
  J.write(ss);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.size(), 32u + (Disorder::pair_count(37) + 7) / 8);
  std::stringstream in(bytes);
  EXPECT_EQ(Disorder::read(in), J);

  std::string bad = bytes;
  bad[24] ^= 1;  // edge count
  std::stringstream in2(bad);
  EXPECT_THROW(Disorder::read(in2), Error);
  std::stringstream in3(bytes.substr(0, bytes.size() - 1));
  EXPECT_THROW(Disorder::read(in3), Error);

  const auto path = std::filesystem::temp_directory_path() / "metastab_disorder_test.bin";
  J.save(path);
  EXPECT_EQ(Disorder::load(path), J);
  std::filesystem::remove(path);
}

TEST(Hamiltonian, HandExamples) {
  // N=2, J_12=1, p=1, h=0, (+,+): -1/2.
  const Disorder J = Disorder::sample(ModelParams{2, 1.0, 0.0, 1.0}, 1);
  const ModelParams P{2, 1.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(hamiltonian_rdcw(SpinConfig::all_plus(2), J, P), -0.5);
  EXPECT_EQ(hamiltonian_cw_canonical(0.0, 0.3, 10), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian_cw_canonical(1.0, 0.3, 10), 10 * (-0.5 - 0.3));
  EXPECT_DOUBLE_EQ(hamiltonian_cw_pairsum(SpinConfig::all_plus(4), 0.0), -1.5);
  EXPECT_DOUBLE_EQ(hamiltonian_cw_canonical(1.0, 0.0, 4), -2.0);
}

TEST(Hamiltonian, AllPlusCountsEdges) {
  const ModelParams P{25, 1.0, 0.17, 0.35};
  const Disorder J = Disorder::sample(P, 3);
  EXPECT_NEAR(hamiltonian_rdcw(SpinConfig::all_plus(25), J, P),
              -static_cast<double>(J.edge_count()) / (25 * 0.35) - 0.17 * 25, 1e-12);
}

TEST(Hamiltonian, DecompositionAndReductionProperties) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(40));
    const double p = trial % 4 == 0 ? 1.0 : 0.05 + 0.9 * rng.uniform();
    const ModelParams P{n, 1.0, 2.0 * rng.uniform() - 1.0, p};
    const Disorder J = Disorder::sample(P, trial);
    const SpinConfig s = random_config(n, rng);
    const double H = hamiltonian_rdcw(s, J, P);
    const double m = s.magnetization();
    ASSERT_NEAR(H, n * cw_energy_density(m, P.h) + 0.5 + delta_term(s, J, P), 1e-12 * std::max(1.0, std::abs(H)));
    ASSERT_NEAR(delta_term(s, J, P), H - hamiltonian_cw_pairsum(s, P.h), 1e-12 * std::max(1.0, std::abs(H)));
    SpinConfig neg = s;
    for (int i = 0; i < n; ++i) neg.flip(i);
    ASSERT_NEAR(delta_term(s, J, P), delta_term(neg, J, P), 1e-12);
    if (p == 1.0) {
      ASSERT_EQ(delta_term(s, J, P), 0.0);
      ASSERT_NEAR(H, hamiltonian_cw_pairsum(s, P.h), 1e-12);
    }
    ASSERT_EQ(pair_sum(s), (static_cast<std::int64_t>(s.spin_sum()) * s.spin_sum() - n) / 2);
  }
}

TEST(Hamiltonian, MatchesDenseDefinition) {
  const ModelParams P{12, 1.0, 0.23, 0.5};
  const Disorder J = Disorder::sample(P, 4);
  const auto a = oracle::dense_J(J);
  for (std::uint32_t s = 0; s < (1u << 12); s += 37)
    ASSERT_NEAR(hamiltonian_rdcw(SpinConfig::from_mask(s, 12), J, P), oracle::energy(a, s, P), 1e-12);
}

TEST(Hamiltonian, FlipIncrementExhaustive) {
  for (double p : {0.3, 0.7, 1.0}) {
    const ModelParams P{10, 1.0, 0.1, p};
    const Disorder J = Disorder::sample(P, 21);
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
      const SpinConfig s = SpinConfig::from_mask(mask, 10);
      const double H = hamiltonian_rdcw(s, J, P);
      for (int l = 0; l < 10; ++l) {
        SpinConfig t = s;
        t.flip(l);
        const FlipIncrement d = flip_increment(s, J, P, l);
        ASSERT_NEAR(d.d_rdcw, hamiltonian_rdcw(t, J, P) - H, 1e-12);
        ASSERT_NEAR(d.d_cw, hamiltonian_cw_pairsum(t, P.h) - hamiltonian_cw_pairsum(s, P.h), 1e-12);
        if (p == 1.0) ASSERT_EQ(d.d_rdcw, d.d_cw);
        ASSERT_NEAR(d.d_rdcw + flip_increment(t, J, P, l).d_rdcw, 0.0, 1e-12);
      }
    }
  }
}

TEST(Hamiltonian, DisorderMeanIsCurieWeiss) {
  // E_J[H(s)] = pairsum(s); 10^4 replicas at a fixed configuration.
  const ModelParams P{12, 1.0, 0.1, 0.5};
  const SpinConfig s = SpinConfig::from_mask(0b101101110001, 12);
  const int R = 10000;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < R; ++r) {
    const double H = hamiltonian_rdcw(s, Disorder::sample(P, 1000 + r), P);
    sum += H;
    sq += H * H;
  }
  const double mean = sum / R, se = std::sqrt((sq / R - mean * mean) / R);
  EXPECT_LT(std::abs(mean - hamiltonian_cw_pairsum(s, P.h)), 4.0 * se);
}
