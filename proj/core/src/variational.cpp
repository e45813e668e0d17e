#include "metastab/variational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/numeric.hpp"

namespace metastab {

double dirichlet_upper(const ExactChain& c, int k1, int k2, std::span<const double> v) {
  require(static_cast<int>(v.size()) == c.N() + 1, "test function has the wrong length");
  require(k1 >= 0 && k1 <= c.N() && k2 >= 0 && k2 <= c.N() && k1 != k2, "bad levels");
  if (v[k1] != 1.0 || v[k2] != 0.0)
    fail(Errc::InvalidArgument, "test function must be 1 on S[m1] and 0 on S[m2]");
  for (double x : v)
    if (!(x >= 0.0 && x <= 1.0)) fail(Errc::InvalidArgument, "test function must lie in [0,1]");
  LogSum acc;
  for (std::uint32_t s = 0; s < c.states(); ++s) {
    const int k = ExactChain::level(s);
    if (k == c.N()) continue;
    const double d = v[k] - v[k + 1];
    if (d == 0.0) continue;
    const double base = c.log_mu(s) - c.log_Z() + 2.0 * std::log(std::abs(d));
    for (int l = 0; l < c.N(); ++l)
      if (!((s >> l) & 1u)) acc.add(base + std::log(c.prob(s, l)));
  }
  return acc.value();
}

double MagFlow::value(int k, int k_next) const {
  if (k_next == k + 1 && k >= k1 && k < k2) return std::exp(log_phi_up[k]);
  if (k_next == k - 1 && k > k1 && k <= k2) return -std::exp(log_phi_down[k]);
  return 0.0;
}

MagFlow MagFlow::scaled(double lambda) const {
  require(lambda > 0.0, "flow scale must be positive");
  MagFlow f = *this;
  for (double& x : f.log_phi_up)
    if (x != kNegInf) x += std::log(lambda);
  for (double& x : f.log_phi_down)
    if (x != kNegInf) x += std::log(lambda);
  return f;
}

MagFlow unit_flow(int N, int k1, int k2) {
  require(N >= 2 && k1 >= 0 && k2 <= N, "levels off the grid");
  if (k1 >= k2) fail(Errc::InvalidArgument, "unit_flow needs m1 < m2");
  MagFlow f;
  f.N = N;
  f.k1 = k1;
  f.k2 = k2;
  f.log_phi_up.assign(N + 1, kNegInf);
  f.log_phi_down.assign(N + 1, kNegInf);
  // phi(m, m+2/N) = [ (1-m)N/2 binom ]^{-1},  phi(m, m-2/N) = -[ (1+m)N/2 binom ]^{-1}
  for (int k = k1; k < k2; ++k) f.log_phi_up[k] = -std::log(static_cast<double>(N - k)) - log_binom(N, k);
  for (int k = k1 + 1; k <= k2; ++k) f.log_phi_down[k] = -std::log(static_cast<double>(k)) - log_binom(N, k);
  return f;
}

FlowReport validate_flow(const MagFlow& f, bool full, double tol) {
  FlowReport r;
  const int N = f.N;
  for (int k = f.k1 + 1; k <= f.k2; ++k)
    r.antisymmetry_error = std::max(r.antisymmetry_error, std::abs(std::expm1(f.log_phi_down[k] - f.log_phi_up[k - 1])));

  if (full) {
    require(N <= 20, "full-resolution flow validation needs N <= 20");
    CompensatedSum out, in;
    for (std::uint32_t s = 0; s < (1u << N); ++s) {
      const int k = std::popcount(s);
      if (k < f.k1 || k > f.k2) continue;
      CompensatedSum div;
      double mag = 0.0;
      for (int l = 0; l < N; ++l) {
        const int kn = ((s >> l) & 1u) ? k - 1 : k + 1;
        const double psi = f.value(k, kn);
        div.add(psi);
        mag += std::abs(psi);
      }
      if (k == f.k1)
        out.add(div.value());
      else if (k == f.k2)
        in.add(-div.value());
      else if (mag > 0.0)
        r.divergence_error = std::max(r.divergence_error, std::abs(div.value()) / mag);
    }
    r.flux_out = out.value();
    r.flux_in = in.value();
  } else {
    for (int k = f.k1 + 1; k < f.k2; ++k) {
      const double up = (N - k) * f.value(k, k + 1), down = k * f.value(k, k - 1);
      r.divergence_error = std::max(r.divergence_error, std::abs(up + down) / (std::abs(up) + std::abs(down)));
    }
    r.flux_out = std::exp(log_binom(N, f.k1)) * (N - f.k1) * f.value(f.k1, f.k1 + 1);
    r.flux_in = -std::exp(log_binom(N, f.k2)) * f.k2 * f.value(f.k2, f.k2 - 1);
  }
  r.ok = r.antisymmetry_error <= tol && r.divergence_error <= tol && std::abs(r.flux_out - 1.0) <= tol &&
         std::abs(r.flux_in - 1.0) <= tol;
  return r;
}

double thomson_lower(const ExactChain& c, const MagFlow& f) {
  require(f.N == c.N(), "flow and chain sizes differ");
  const FlowReport rep = validate_flow(f, false);
  if (!rep.ok) fail(Errc::InvalidFlow, "flow is not a unit antisymmetric flow (flux out " + std::to_string(rep.flux_out) + ")");
  LogSum D;  // each unordered edge once; the 1/2 cancels the two orientations
  for (std::uint32_t s = 0; s < c.states(); ++s) {
    const int k = ExactChain::level(s);
    if (k < f.k1 || k >= f.k2) continue;
    const double lmu = c.log_mu(s) - c.log_Z();
    for (int l = 0; l < c.N(); ++l) {
      if ((s >> l) & 1u) continue;
      const double pr = c.prob(s, l);
      if (!(pr > 0.0)) fail(Errc::InvalidFlow, "zero-rate edge carries flow");
      D.add(2.0 * f.log_phi_up[k] - lmu - std::log(pr));
    }
  }
  return -D.value();
}

Lemma32 lemma32_check(const Disorder& J, const ModelParams& params, const SpinConfig& sigma,
                      int k_prime) {
  require(sigma.size() == J.size() && J.size() == params.N, "dimension mismatch");
  const int N = params.N;
  const int k = sigma.up_count();
  const double np = N * params.p;
  CompensatedSum lhs;
  for (int l = 0; l < N; ++l) {
    const int sl = sigma.spin(l);
    const int k_next = sl > 0 ? k - 1 : k + 1;
    if (k_next != k_prime) continue;
    const double dH = rdcw_increment(sl, local_field(sigma, J, l), np, params.h);
    const double dHt = cw_increment(sl, sigma.spin_sum(), N, params.h);
    lhs.add(std::exp(params.beta * (std::max(dH, 0.0) - std::max(dHt, 0.0))));
  }
  double count = 0.0;
  if (k_prime == k - 1) count = k;          // N(1+m)/2
  else if (k_prime == k + 1) count = N - k;  // N(1-m)/2
  Lemma32 out{};
  out.lhs = lhs.value();
  out.rhs = std::exp(2.0 * params.beta * (1.0 + params.h)) * count;
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

namespace {

void check_band(const WellDecomposition& W, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::InvalidArgument, "gamma must lie in (0,1)");
  require(W.k_deltaN < W.k_epsN, "band [m_deltaN, m_epsN) is empty");
}

void finish(SuperharmonicReport& r) {
  r.max_value = r.value.empty() ? 0.0 : *std::max_element(r.value.begin(), r.value.end());
  r.violations = static_cast<int>(std::count_if(r.value.begin(), r.value.end(), [](double v) { return v >= 0.0; }));
}

}  // namespace

SuperharmonicReport superharmonic_lumped(const Landscape& L, const WellDecomposition& W, double gamma) {
  check_band(W, gamma);
  const int N = W.N;
  const double beta = L.beta, h = L.h;
  auto f = [&](int k) { return f_beta(2.0 * k / N - 1.0, beta, h); };
  auto g = [&](int k) { return 0.5 * N * (f(k + 1) - f(k)); };
  SuperharmonicReport r;
  for (int k = W.k_deltaN; k < W.k_epsN; ++k) {
    const double mb = 2.0 * k / N - 1.0;
    const double r_plus = std::exp(-2.0 * beta * std::max(-1.0 / N - (mb + h), 0.0)) * (1.0 - mb) / 2.0;
    const double r_minus = std::exp(-2.0 * beta * std::max(-1.0 / N + mb + h, 0.0)) * (1.0 + mb) / 2.0;
    const double G = std::expm1(2.0 * beta * (1.0 - gamma) * g(k)) +
                     (r_minus / r_plus) * std::expm1(-2.0 * beta * (1.0 - gamma) * g(k - 1));
    r.levels.push_back(k);
    r.m.push_back(mb);
    r.value.push_back(G);
    r.g.push_back(g(k));
  }
  finish(r);
  return r;
}

SuperharmonicReport superharmonic_full(const ExactChain& c, const Landscape& L,
                                       const WellDecomposition& W, double gamma) {
  check_band(W, gamma);
  require(W.N == c.N(), "well decomposition and chain sizes differ");
  const int N = c.N();
  const double beta = L.beta, h = L.h;
  auto f = [&](int k) { return f_beta(2.0 * k / N - 1.0, beta, h); };
  SuperharmonicReport r;
  for (int k = W.k_deltaN; k < W.k_epsN; ++k) {
    double worst = -std::numeric_limits<double>::infinity();
    const double up = std::expm1(beta * N * (1.0 - gamma) * (f(k + 1) - f(k)));
    const double down = k > 0 ? std::expm1(beta * N * (1.0 - gamma) * (f(k - 1) - f(k))) : 0.0;
    for (auto s : c.level_states(k)) {
      CompensatedSum acc;  // L psi(s) / psi(s)
      for (int l = 0; l < N; ++l) acc.add(c.prob(s, l) * (((s >> l) & 1u) ? down : up));
      worst = std::max(worst, acc.value());
    }
    r.levels.push_back(k);
    r.m.push_back(2.0 * k / N - 1.0);
    r.value.push_back(worst);
    r.g.push_back(0.5 * N * (f(k + 1) - f(k)));
  }
  finish(r);
  return r;
}

}  // namespace metastab
