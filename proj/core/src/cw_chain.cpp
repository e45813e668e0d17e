#include "metastab/cw_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/numeric.hpp"

namespace metastab {

namespace {

void check_level(const LumpedChain& c, int k) {
  if (k < 0 || k > c.N) fail(Errc::InvalidArgument, "level " + std::to_string(k) + " is off the grid");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

std::optional<Landscape> try_landscape(double beta, double h) {
  if (!(beta > kBetaCritical) || h < 0.0) return std::nullopt;
  try {
    return critical_points(beta, h);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

LumpedChain build_lumped_chain(int N, double beta, double h) {
  require(N >= 2, "lumped chain needs N >= 2");
  require(beta >= 0.0, "lumped chain needs beta >= 0");
  LumpedChain c;
  c.N = N;
  c.beta = beta;
  c.h = h;
  c.log_w.resize(N + 1);
  c.r_up.assign(N + 1, 0.0);
  c.r_down.assign(N + 1, 0.0);
  // log_w is accumulated level to level from k = 0 so that neighbouring weights differ by exactly
  // the increment the rates use; a direct lgamma evaluation loses ~1e-12 at N = 500.
  CompensatedSum lw;
  lw.add(-beta * N * cw_energy_density(-1.0, h));
  for (int k = 0; k <= N; ++k) {
    const double m = 2.0 * k / N - 1.0;
    c.log_w[k] = lw.value();
    // N[E(m +- 2/N) - E(m)] in closed form
    const double dE_up = -2.0 * m - 2.0 / N - 2.0 * h;
    if (k < N) {
      c.r_up[k] = std::exp(-beta * positive_part(dE_up)) * (N - k) / N;
      lw.add(std::log(static_cast<double>(N - k) / (k + 1)));
      lw.add(-beta * dE_up);
    }
    if (k > 0) c.r_down[k] = std::exp(-beta * positive_part(2.0 * m - 2.0 / N + 2.0 * h)) * k / N;
  }
  c.log_Ztilde = logsumexp(c.log_w);
  return c;
}

double log_cap_asymptotic(const Landscape& L, int N, double log_Ztilde) {
  return -log_Ztilde - L.beta * N * L.f_star + 0.5 * std::log(L.beta * (-L.fpp_star)) -
         std::log(kPi * N) + 0.5 * std::log((1.0 + L.m_star) / (1.0 - L.m_star));
}

double log_eyring_kramers(const Landscape& L, int N) {
  return L.beta * N * (L.f_star - L.f_minus) + std::log(kPi / (1.0 + L.m_star)) +
         0.5 * std::log((1.0 - L.m_star * L.m_star) / (1.0 - L.m_minus * L.m_minus)) +
         std::log(static_cast<double>(N)) - std::log(L.beta * std::sqrt(L.fpp_minus * (-L.fpp_star)));
}

CwCapacity cw_capacity(const LumpedChain& c, int k1, int k2) {
  check_level(c, k1);
  check_level(c, k2);
  require(k1 != k2, "capacity needs distinct levels");
  const int lo = std::min(k1, k2), hi = std::max(k1, k2);
  LogSum resist;
  for (int x = lo; x < hi; ++x) resist.add(-c.log_Q(x) - std::log(c.r_up[x]));
  CwCapacity out{};
  out.log_cap_exact = -resist.value();
  out.cap_exact = std::exp(out.log_cap_exact);
  out.log_Zcap_exact = out.log_cap_exact + c.log_Ztilde;
  if (auto L = try_landscape(c.beta, c.h)) {
    out.log_cap_asymptotic = log_cap_asymptotic(*L, c.N, c.log_Ztilde);
    out.cap_asymptotic = std::exp(*out.log_cap_asymptotic);
  }
  return out;
}

CwHitting cw_mean_hitting(const LumpedChain& c, int a, int b) {
  check_level(c, a);
  check_level(c, b);
  if (a >= b) fail(Errc::InvalidArgument, "cw_mean_hitting needs a < b");
  LogSum below;  // log sum_{y <= x} w(y)
  for (int y = 0; y < a; ++y) below.add(c.log_w[y]);
  LogSum total;
  for (int x = a; x < b; ++x) {
    below.add(c.log_w[x]);
    total.add(below.value() - c.log_w[x] - std::log(c.r_up[x]));
  }
  CwHitting out{};
  out.log_exact = total.value();
  out.exact = std::exp(out.log_exact);
  if (auto L = try_landscape(c.beta, c.h)) {
    out.log_eyring_kramers = log_eyring_kramers(*L, c.N);
    out.eyring_kramers = std::exp(*out.log_eyring_kramers);
  }
  return out;
}

double cw_mean_hitting_tridiagonal_log(const LumpedChain& c, int a, int b) {
  check_level(c, a);
  check_level(c, b);
  if (a >= b) fail(Errc::InvalidArgument, "needs a < b");
  // (r_up + r_down) t(x) - r_up t(x+1) - r_down t(x-1) = 1 for x < b, t(b) = 0.
  // Elimination tracks e = pivot - r_up (the row-sum defect) instead of the pivot itself, which
  // keeps every update free of subtraction.
  std::vector<long double> dprime(b), y(b);
  long double e_prev = 0.0L;
  for (int x = 0; x < b; ++x) {
    const long double up = c.r_up[x], down = c.r_down[x];
    long double e = down, rhs = 1.0L;
    if (x > 0) {
      const long double f = down / dprime[x - 1];
      e = f * e_prev;
      rhs += f * y[x - 1];
    }
    dprime[x] = up + e;
    y[x] = rhs;
    e_prev = e;
  }
  long double t = 0.0L;
  for (int x = b - 1; x >= a; --x) t = (y[x] + static_cast<long double>(c.r_up[x]) * t) / dprime[x];
  return static_cast<double>(std::log(t));
}

std::vector<double> cw_equilibrium_potential(const LumpedChain& c, int k1, int k2) {
  check_level(c, k1);
  check_level(c, k2);
  if (k1 >= k2) fail(Errc::InvalidArgument, "equilibrium potential needs k1 < k2");
  std::vector<double> log_tail(c.N + 1, kNegInf);  // log sum_{y=k}^{k2-1} 1/(w r_up)
  LogSum acc;
  for (int y = k2 - 1; y >= k1; --y) {
    acc.add(-c.log_w[y] - std::log(c.r_up[y]));
    log_tail[y] = acc.value();
  }
  std::vector<double> v(c.N + 1, 0.0);
  for (int k = 0; k <= c.N; ++k) {
    if (k <= k1)
      v[k] = 1.0;
    else if (k >= k2)
      v[k] = 0.0;
    else
      v[k] = std::exp(log_tail[k] - log_tail[k1]);
  }
  return v;
}

double lumped_dirichlet_form(const LumpedChain& c, std::span<const double> v) {
  require(static_cast<int>(v.size()) == c.N + 1, "test function has the wrong length");
  CompensatedSum s;
  for (int k = 0; k < c.N; ++k) {
    double d = v[k] - v[k + 1];
    if (d != 0.0) s.add(std::exp(c.log_Q(k)) * c.r_up[k] * d * d);
  }
  return s.value();
}

}  // namespace metastab
