#pragma once

#include <span>
#include <vector>

#include "metastab/disorder.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/landscape.hpp"
#include "metastab/spin.hpp"

namespace metastab {

// Dirichlet form of s -> v(level(s)), with v(k1) = 1, v(k2) = 0, v in [0,1]. Returns its log.
double dirichlet_upper(const ExactChain& chain, int k1, int k2, std::span<const double> v);

// Unit flow along magnetisation levels from S[k1] to S[k2], k1 < k2. Edge values are kept as
// logs of magnitudes: phi_up(k) on (k -> k+1) is positive, phi_down(k) on (k -> k-1) negative.
struct MagFlow {
  int N = 0;
  int k1 = 0, k2 = 0;
  std::vector<double> log_phi_up;    // valid for k1 <= k < k2
  std::vector<double> log_phi_down;  // valid for k1 < k <= k2

  // Psi(s, t) for neighbouring levels k -> k'.
  double value(int k, int k_next) const;
  MagFlow scaled(double lambda) const;
};

MagFlow unit_flow(int N, int k1, int k2);

struct FlowReport {
  double antisymmetry_error = 0.0;  // max relative
  double divergence_error = 0.0;    // max |div| / sum |terms| at interior configurations
  double flux_out = 0.0;            // out of S[k1]
  double flux_in = 0.0;             // into S[k2]
  bool ok = false;
};

// Full resolution enumerates every configuration (N <= 20); otherwise per-level counts are used.
FlowReport validate_flow(const MagFlow& flow, bool at_full_resolution, double tol = 1e-12);

// 1/D(Psi) with D = 1/2 sum Psi^2 / (mu p). Returns the log of the lower bound.
double thomson_lower(const ExactChain& chain, const MagFlow& flow);

struct Lemma32 {
  double lhs;
  double rhs;
  bool ok;
};

Lemma32 lemma32_check(const Disorder& J, const ModelParams& params, const SpinConfig& sigma,
                      int k_prime);

struct SuperharmonicReport {
  std::vector<int> levels;
  std::vector<double> m;
  std::vector<double> value;  // G_+ (lumped) or max_s L psi(s)/psi(s) (full)
  std::vector<double> g;      // g(m) at each band level
  int violations = 0;         // entries with value >= 0
  double max_value = 0.0;
};

SuperharmonicReport superharmonic_lumped(const Landscape& land, const WellDecomposition& well,
                                         double gamma);
SuperharmonicReport superharmonic_full(const ExactChain& chain, const Landscape& land,
                                       const WellDecomposition& well, double gamma);

}  // namespace metastab
