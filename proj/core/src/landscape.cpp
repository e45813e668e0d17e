#include "metastab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/numeric.hpp"

namespace metastab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Root of f_beta(m) = level on [a,b], where f_beta - level changes sign.
double solve_level(double a, double b, double level, double beta, double h) {
  double fa = f_beta(a, beta, h) - level;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    double fm = f_beta(mid, beta, h) - level;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double fixed_point_residual(double m, double beta, double h) { return m - std::tanh(beta * (m + h)); }

}  // namespace

std::vector<double> MagGrid::points() const {
  std::vector<double> pts(static_cast<std::size_t>(size()));
  for (int k = 0; k <= N; ++k) pts[k] = point(k);
  return pts;
}

int MagGrid::level_of(double m) const {
  require(m >= -1.0 - 1e-12 && m <= 1.0 + 1e-12, "magnetisation outside [-1,1]");
  double x = (m + 1.0) * N / 2.0;
  double k = std::round(x);
  if (std::abs(x - k) > 1e-9)
    fail(Errc::InvalidArgument, "m = " + std::to_string(m) + " is not on the grid of N = " + std::to_string(N));
  return static_cast<int>(k);
}

MagGrid gamma_grid(int N) {
  require(N >= 1, "grid needs N >= 1");
  return MagGrid{N};
}

int nearest_grid(double m, const MagGrid& grid) {
  require(m >= -1.0 && m <= 1.0, "nearest_grid: m outside [-1,1]");
  double x = (m + 1.0) * grid.N / 2.0;
  int k = static_cast<int>(std::floor(x + 0.5));  // x.5 rounds up, i.e. toward +1
  return std::clamp(k, 0, grid.N);
}

double entropy_limit(double m) { return xlogx((1.0 - m) / 2.0) + xlogx((1.0 + m) / 2.0); }

EntropyTerms entropy_terms(int N, int k) {
  require(N >= 1 && k >= 0 && k <= N, "entropy_terms: level outside the grid");
  const double m = 2.0 * k / N - 1.0;
  EntropyTerms t{};
  t.I_N = -log_binom(N, k) / N;
  t.I = entropy_limit(m);
  if (k == 0 || k == N) {
    t.stirling_residual = kNaN;
  } else {
    double corr = std::log((1.0 - m * m) / 4.0) / (2.0 * N) + (std::log(N) + std::log(2.0 * kPi)) / (2.0 * N);
    t.stirling_residual = t.I_N - t.I - corr;
  }
  return t;
}

double f_beta(double m, double beta, double h) {
  require(m >= -1.0 && m <= 1.0, "f_beta: m outside [-1,1]");
  require(beta > 0.0, "f_beta: beta must be > 0");
  return cw_energy_density(m, h) + entropy_limit(m) / beta;
}

FreeEnergy free_energy(double m, double beta, double h) {
  require(m > -1.0 && m < 1.0, "free_energy derivatives need |m| < 1");
  FreeEnergy fe{};
  fe.f = f_beta(m, beta, h);
  fe.fp = -m - h + std::atanh(m) / beta;
  fe.fpp = -1.0 + 1.0 / (beta * (1.0 - m * m));
  return fe;
}

double f_beta_N(int N, int k, double beta, double h) {
  require(beta > 0.0, "f_beta_N: beta must be > 0");
  return cw_energy_density(2.0 * k / N - 1.0, h) + entropy_terms(N, k).I_N / beta;
}

GridCriticalPoints Landscape::on_grid(int N) const {
  MagGrid g = gamma_grid(N);
  GridCriticalPoints c{};
  c.N = N;
  c.k_minus = nearest_grid(m_minus, g);
  c.k_star = nearest_grid(m_star, g);
  c.k_plus = nearest_grid(m_plus, g);
  c.m_minus_N = g.point(c.k_minus);
  c.m_star_N = g.point(c.k_star);
  c.m_plus_N = g.point(c.k_plus);
  return c;
}

Landscape critical_points(double beta, double h) {
  require(beta > kBetaCritical, "critical_points needs beta > 1");
  require(h >= 0.0, "critical_points needs h >= 0");
  constexpr int kCells = 10000;
  std::vector<double> roots;
  auto node = [](int i) { return -1.0 + 2.0 * i / kCells; };
  for (int i = 0; i < kCells; ++i) {
    double a = node(i), b = node(i + 1);
    double ga = fixed_point_residual(a, beta, h), gb = fixed_point_residual(b, beta, h);
    if (ga == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (ga * gb >= 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      double gm = fixed_point_residual(mid, beta, h);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if ((gm > 0) == (ga > 0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    double ra = a, rb = b;
    roots.push_back(std::abs(fixed_point_residual(ra, beta, h)) <= std::abs(fixed_point_residual(rb, beta, h)) ? ra : rb);
  }
  if (roots.size() != 3)
    fail(Errc::FewerThanThreeRoots, "m = tanh(beta(m+h)) has " + std::to_string(roots.size()) +
                                        " solution(s) at beta = " + std::to_string(beta) +
                                        ", h = " + std::to_string(h));
  for (double r : roots)
    if (std::abs(fixed_point_residual(r, beta, h)) > 1e-12)
      fail(Errc::SolverError, "fixed-point residual above 1e-12");

  Landscape L{};
  L.beta = beta;
  L.h = h;
  L.m_minus = roots[0];
  L.m_star = roots[1];
  L.m_plus = roots[2];
  FreeEnergy a = free_energy(L.m_minus, beta, h), s = free_energy(L.m_star, beta, h),
             b = free_energy(L.m_plus, beta, h);
  L.f_minus = a.f;
  L.f_star = s.f;
  L.f_plus = b.f;
  L.fpp_minus = a.fpp;
  L.fpp_star = s.fpp;
  L.fpp_plus = b.fpp;
  return L;
}

WellDecomposition well_decomposition(const Landscape& L, int N, double delta, double eps) {
  require(N >= 2, "well_decomposition needs N >= 2");
  require(delta > 0.0, "delta must be > 0");
  require(eps > 0.0, "eps must be > 0");
  const double beta = L.beta, h = L.h;
  const double f_m1 = f_beta(-1.0, beta, h);
  const double delta_max = std::min(f_m1, L.f_star) - L.f_minus;
  if (!(delta < delta_max))
    fail(Errc::DeltaTooLarge, "delta = " + std::to_string(delta) + " must be below " + std::to_string(delta_max));
  const double eps_max = L.f_minus + delta - L.f_plus;
  if (!(eps < eps_max))
    fail(Errc::EpsTooLarge, "eps = " + std::to_string(eps) + " must be below " + std::to_string(eps_max));

  const MagGrid grid = gamma_grid(N);
  auto f_at = [&](int k) { return f_beta(grid.point(k), beta, h); };

  WellDecomposition W{};
  W.N = N;
  W.delta = delta;
  W.eps = eps;
  const double level = L.f_minus + delta;
  W.m_delta = solve_level(L.m_star, L.m_plus, level, beta, h);

  // delta_N: largest admissible f - f(m_-) over grid points of [m_delta, m_+).
  int k = static_cast<int>(std::ceil((W.m_delta + 1.0) * N / 2.0 - 1e-9));
  while (k <= N && (grid.point(k) < W.m_delta || f_at(k) - L.f_minus > delta)) ++k;
  if (k > N || grid.point(k) >= L.m_plus || !(f_at(k) - L.f_minus > 0.0))
    fail(Errc::InvalidArgument, "no grid point of U_delta(m_+) left of m_+ at this N");
  W.k_deltaN = k;
  W.m_deltaN = grid.point(k);
  W.delta_N = f_at(k) - L.f_minus;
  const double levelN = L.f_minus + W.delta_N;

  // U_{delta,N}(m_+): from m_deltaN to the right end of the level-set component.
  W.U_plus.lo = k;
  W.U_plus.hi = k;
  while (W.U_plus.hi < N && f_at(W.U_plus.hi + 1) <= levelN) ++W.U_plus.hi;

  // U_{delta,N}(m_-): grid points inside the continuum component around m_-.
  double a = solve_level(-1.0, L.m_minus, levelN, beta, h);
  double b = solve_level(L.m_minus, L.m_star, levelN, beta, h);
  int lo = static_cast<int>(std::ceil((a + 1.0) * N / 2.0 - 1e-9));
  int hi = static_cast<int>(std::floor((b + 1.0) * N / 2.0 + 1e-9));
  lo = std::max(lo, 0);
  hi = std::min(hi, N);
  while (lo <= hi && f_at(lo) > levelN) ++lo;
  while (hi >= lo && f_at(hi) > levelN) --hi;
  W.U_minus = {lo, hi};

  // eps_N: largest admissible f - f(m_+) over U_{delta,N}(m_+) left of m_+.
  W.m_eps = solve_level(L.m_star, L.m_plus, L.f_plus + eps, beta, h);
  int ke = -1;
  for (int j = W.U_plus.lo; j <= W.U_plus.hi && grid.point(j) < L.m_plus; ++j) {
    double v = f_at(j) - L.f_plus;
    if (v > 0.0 && v <= eps) {
      ke = j;
      break;
    }
  }
  if (ke < 0) fail(Errc::InvalidArgument, "eps is below the grid resolution at this N");
  W.k_epsN = ke;
  W.m_epsN = grid.point(ke);
  W.eps_N = f_at(ke) - L.f_plus;
  W.k_plus_N = nearest_grid(L.m_plus, grid);
  W.m_plus_N = grid.point(W.k_plus_N);
  W.theta_N = 2.0 * (W.k_plus_N - W.k_epsN) / N;
  return W;
}

double ell_N(double x, double m_plus_N, double beta, double h) {
  const double c = std::log(2.0) + beta * std::abs(2.0 - 2.0 * h) + 1.0;
  const double base = 1.0 - m_plus_N;
  return 0.5 * (x * c - xlogx(base + x) + xlogx(base));
}

CrossingBound monotone_crossing_bound(int N, double m_plus_N, double theta_N, double beta,
                                      double h) {
  require(theta_N >= 0.0 && theta_N < 1.0 + m_plus_N, "theta_N must lie in [0, 1 + m_plus_N)");
  const double kx = N * theta_N / 2.0;
  const double kr = std::round(kx);
  if (std::abs(kx - kr) > 1e-9) fail(Errc::InvalidArgument, "N theta_N / 2 is not an integer");
  const double nx = N * (1.0 - m_plus_N + theta_N) / 2.0;
  const double nr = std::round(nx);
  if (std::abs(nx - nr) > 1e-9) fail(Errc::InvalidArgument, "m_plus_N is not on the grid");
  CrossingBound cb{};
  cb.k = static_cast<int>(kr);
  const int n_minus = static_cast<int>(nr);
  const double log_c = -beta * std::abs(2.0 - 2.0 * h);
  cb.log_prob_lower = cb.k * (log_c - std::log(static_cast<double>(N))) + log_factorial(cb.k) +
                      log_binom(n_minus, cb.k);
  cb.prob_lower = std::exp(cb.log_prob_lower);
  cb.ellN = ell_N(theta_N, m_plus_N, beta, h);
  return cb;
}

}  // namespace metastab
