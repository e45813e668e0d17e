#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metastab/disorder.hpp"
#include "metastab/params.hpp"

namespace metastab {

struct ExactOptions {
  int max_n = 16;           // hard cap, at most 20
  double tol = 1e-13;       // relative residual targeted by the iterative solver
  double accept = 1e-10;    // relative residual accepted after the solve
  int max_iter = 100000;
  bool dense_fallback = true;  // dense LU when the iterative solve fails and N <= 12
};

// Glauber/Metropolis chain on all 2^N configurations; bit i of a state index is spin i (set = +1).
class ExactChain {
 public:
  ExactChain(const Disorder& J, const ModelParams& params, ExactOptions opt = {});

  int N() const { return params_.N; }
  std::uint32_t states() const { return 1u << params_.N; }
  const ModelParams& params() const { return params_; }
  const ExactOptions& options() const { return opt_; }

  double energy(std::uint32_t s) const { return energy_[s]; }
  double log_mu(std::uint32_t s) const { return -params_.beta * energy_[s]; }  // unnormalised
  double log_Z() const { return log_Z_; }
  double mu(std::uint32_t s) const { return mu_[s]; }  // normalised
  const std::vector<double>& mu() const { return mu_; }

  static int level(std::uint32_t s) { return __builtin_popcount(s); }
  const std::vector<std::uint32_t>& level_states(int k) const { return levels_[k]; }

  double prob(std::uint32_t s, int site) const { return P_[static_cast<std::size_t>(s) * N() + site]; }
  double leave(std::uint32_t s) const { return leave_[s]; }  // sum of off-diagonal probabilities
  double hold(std::uint32_t s) const { return 1.0 - leave_[s]; }

 private:
  ModelParams params_;
  ExactOptions opt_;
  std::vector<double> energy_;
  std::vector<double> mu_;
  std::vector<double> P_;
  std::vector<double> leave_;
  std::vector<std::vector<std::uint32_t>> levels_;
  double log_Z_ = 0.0;
};

inline ExactChain build_full_chain(const Disorder& J, const ModelParams& params, ExactOptions opt = {}) {
  return ExactChain(J, params, opt);
}

struct SolveInfo {
  std::string method;  // "pcg" or "dense-lu"
  int iterations = 0;
  double residual = 0.0;
};

// Solution of E_s[...] = P[...] off a boundary set given as a state mask.
struct LinearSolution {
  std::vector<double> x;
  SolveInfo info;
};

// Harmonic functions for A = S[kA], B = S[kB].
struct PairSolve {
  int kA = 0, kB = 0;
  std::vector<double> h_AB;    // P_s(tau_A < tau_B), 1 on A, 0 on B
  std::vector<double> e_BA;    // P_s(tau_B < tau_A), 0 on A, 1 on B (independent solve)
  double complement_defect = 0.0;  // max |h_AB + e_BA - 1|
  SolveInfo info_AB, info_BA;
};

PairSolve harmonic_function(const ExactChain& chain, int kA, int kB);

struct ExactCapacity {
  double cap;             // sum_A mu(s) P_s(tau_B < tau_A), normalised mu
  double log_cap;
  double log_Zcap;        // log(Z * cap)
  double cap_dirichlet;   // 1/2 sum mu p (h - h')^2
};

ExactCapacity capacity_exact(const ExactChain& chain, const PairSolve& solve);

// P_s(tau_B < tau_A) for s in A, aligned with level_states(kA).
std::vector<double> escape_probabilities(const ExactChain& chain, const PairSolve& solve);

struct LastExit {
  std::vector<std::uint32_t> states;
  std::vector<double> prob;
};

LastExit last_exit_distribution(const ExactChain& chain, const PairSolve& solve);

// E_s[tau_B] for B = S[kB], first-positive-time convention (states in B get the return time).
LinearSolution hitting_times(const ExactChain& chain, int kB);

struct MeanHitting {
  std::vector<double> tau;  // per state
  double tau_nu_direct;     // sum_A nu(s) E_s[tau_B]
  double tau_nu_capacity;   // sum mu h_AB / cap
  double harmonic_sum;
  SolveInfo info;
};

MeanHitting mean_hitting_exact(const ExactChain& chain, const PairSolve& solve);

struct MesoMeasure {
  std::vector<double> Q;  // Q(m_k) = mu(S[k])
};

MesoMeasure meso_measure(const ExactChain& chain);
double harmonic_sum(const ExactChain& chain, const PairSolve& solve);

}  // namespace metastab
