#pragma once

#include <vector>

namespace metastab {

// Magnetisation grid {-1, -1+2/N, ..., 1}. Levels are indexed by the number k of
// plus spins, m_k = 2k/N - 1.
struct MagGrid {
  int N = 1;

  int size() const { return N + 1; }
  double point(int k) const { return 2.0 * k / N - 1.0; }
  std::vector<double> points() const;
  // Level of an on-grid m; throws if m is not on the grid (tolerance 1e-9 / N).
  int level_of(double m) const;
};

MagGrid gamma_grid(int N);
// Nearest level; ties break toward +1.
int nearest_grid(double m, const MagGrid& grid);

struct EntropyTerms {
  double I_N;
  double I;
  double stirling_residual;  // NaN at m = +-1
};

EntropyTerms entropy_terms(int N, int k);

// I(m) = ((1-m)/2) log((1-m)/2) + ((1+m)/2) log((1+m)/2)
double entropy_limit(double m);

struct FreeEnergy {
  double f;
  double fp;
  double fpp;
};

// f_beta(m) = E(m) + I(m)/beta, valid on [-1,1].
double f_beta(double m, double beta, double h);
// With derivatives; needs |m| < 1.
FreeEnergy free_energy(double m, double beta, double h);
// f_{beta,N}(m_k) = E(m_k) + I_N(m_k)/beta.
double f_beta_N(int N, int k, double beta, double h);

struct GridCriticalPoints {
  int N;
  int k_minus, k_star, k_plus;
  double m_minus_N, m_star_N, m_plus_N;
};

struct Landscape {
  double beta;
  double h;
  double m_minus, m_star, m_plus;
  double f_minus, f_star, f_plus;
  double fpp_minus, fpp_star, fpp_plus;

  double f_at(double m) const { return f_beta(m, beta, h); }
  GridCriticalPoints on_grid(int N) const;
};

// Solves m = tanh(beta (m + h)) by bisection on sign changes over 1e4 subintervals.
Landscape critical_points(double beta, double h);

struct LevelRange {
  int lo = 0;
  int hi = -1;  // empty when hi < lo
  bool contains(int k) const { return k >= lo && k <= hi; }
  bool empty() const { return hi < lo; }
};

struct WellDecomposition {
  int N;
  double delta, delta_N;
  double m_delta;   // continuum left end of U_delta(m_+)
  double m_deltaN;  // grid left end of U_{delta,N}(m_+)
  int k_deltaN;
  double eps, eps_N;
  double m_eps;
  double m_epsN;
  int k_epsN;
  double m_plus_N;
  int k_plus_N;
  double theta_N;
  LevelRange U_minus;
  LevelRange U_plus;
};

WellDecomposition well_decomposition(const Landscape& land, int N, double delta, double eps);

struct CrossingBound {
  int k;              // N theta_N / 2 upward steps
  double ellN;        // l_N(theta_N)
  double log_prob_lower;
  double prob_lower;
};

double ell_N(double x, double m_plus_N, double beta, double h);
CrossingBound monotone_crossing_bound(int N, double m_plus_N, double theta_N, double beta,
                                      double h);

}  // namespace metastab
