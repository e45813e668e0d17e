#pragma once

#include <cstdint>

#include "metastab/disorder.hpp"
#include "metastab/params.hpp"
#include "metastab/spin.hpp"

namespace metastab {

// E(m) = -m^2/2 - h m
inline double cw_energy_density(double m, double h) { return -0.5 * m * m - h * m; }

// Sum_{i<j} J_ij s_i s_j (integer).
std::int64_t coupled_pair_sum(const SpinConfig& s, const Disorder& J);
// Sum_{i<j} s_i s_j = (M^2 - N)/2.
std::int64_t pair_sum(const SpinConfig& s);
// k_l = Sum_i J_il s_i.
int local_field(const SpinConfig& s, const Disorder& J, int site);

// -(1/(Np)) Sum_{i<j} J_ij s_i s_j - h Sum s_i
double hamiltonian_rdcw(const SpinConfig& s, const Disorder& J, const ModelParams& params);
// N E(m)
double hamiltonian_cw_canonical(double m, double h, int n);
// -(1/N) Sum_{i<j} s_i s_j - h Sum s_i  ( = canonical + 1/2 )
double hamiltonian_cw_pairsum(const SpinConfig& s, double h);
// -(1/(Np)) Sum_{i<j} (J_ij - p) s_i s_j, so that H = pairsum + delta exactly.
double delta_term(const SpinConfig& s, const Disorder& J, const ModelParams& params);

struct FlipIncrement {
  double d_rdcw;  // H(s^l) - H(s)
  double d_cw;    // same for the Curie-Weiss Hamiltonian
};

FlipIncrement flip_increment(const SpinConfig& s, const Disorder& J, const ModelParams& params,
                             int site);

// Increments in terms of already known local field and spin sum.
inline double rdcw_increment(int spin, int field, double np, double h) {
  return spin * (2.0 * field / np + 2.0 * h);
}
inline double cw_increment(int spin, int spin_sum, int n, double h) {
  return spin * (2.0 * (spin_sum - spin) / n + 2.0 * h);
}

}  // namespace metastab
