#pragma once

#include <optional>
#include <span>
#include <vector>

#include "metastab/landscape.hpp"

namespace metastab {

// Birth-death chain of the Curie-Weiss magnetisation on levels k = 0..N.
struct LumpedChain {
  int N = 0;
  double beta = 0.0;
  double h = 0.0;
  std::vector<double> log_w;   // log[binom(N,k) exp(-beta N E(m_k))]
  std::vector<double> r_up;    // k -> k+1
  std::vector<double> r_down;  // k -> k-1
  double log_Ztilde = 0.0;

  MagGrid grid() const { return MagGrid{N}; }
  double log_Q(int k) const { return log_w[k] - log_Ztilde; }
  double r_hold(int k) const { return 1.0 - r_up[k] - r_down[k]; }
};

LumpedChain build_lumped_chain(int N, double beta, double h);

struct CwCapacity {
  double cap_exact;
  double log_cap_exact;
  double log_Zcap_exact;  // log(Ztilde * cap)
  std::optional<double> log_cap_asymptotic;
  std::optional<double> cap_asymptotic;
};

// Capacity between levels k1 != k2, normalised measure.
CwCapacity cw_capacity(const LumpedChain& chain, int k1, int k2);

struct CwHitting {
  double exact;
  double log_exact;
  std::optional<double> log_eyring_kramers;
  std::optional<double> eyring_kramers;
};

// Mean hitting time of level b from level a < b (reflecting at -1).
CwHitting cw_mean_hitting(const LumpedChain& chain, int a, int b);
// Same quantity by a long-double Thomas solve of the hitting-time equations; returns the log.
double cw_mean_hitting_tridiagonal_log(const LumpedChain& chain, int a, int b);

double log_eyring_kramers(const Landscape& land, int N);
double log_cap_asymptotic(const Landscape& land, int N, double log_Ztilde);

// Equilibrium potential: 1 at and below k1, 0 at and above k2 (k1 < k2).
std::vector<double> cw_equilibrium_potential(const LumpedChain& chain, int k1, int k2);
// Sum over edges of Q(k) r_up(k) (v(k) - v(k+1))^2.
double lumped_dirichlet_form(const LumpedChain& chain, std::span<const double> v);

}  // namespace metastab
