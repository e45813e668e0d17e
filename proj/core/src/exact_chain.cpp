#include "metastab/exact_chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/linear_solve.hpp"
#include "metastab/numeric.hpp"

namespace metastab {

ExactChain::ExactChain(const Disorder& J, const ModelParams& params, ExactOptions opt)
    : params_(params), opt_(opt) {
  params.validate();
  require(J.size() == params.N, "disorder size does not match params.N");
  const int n = params.N;
  if (n > std::min(opt.max_n, 20))
    fail(Errc::NTooLarge, "exact enumeration capped at N = " + std::to_string(std::min(opt.max_n, 20)) +
                              ", got " + std::to_string(n));
  const std::uint32_t S = states();
  const std::vector<std::uint64_t> rows = J.row_masks();
  std::vector<int> deg(n);
  for (int l = 0; l < n; ++l) deg[l] = std::popcount(rows[l]);
  const double np = n * params.p;

  // Gray-code sweep: S_J = sum_{i<j} J_ij s_i s_j updated by -2 s_l k_l per flip.
  energy_.resize(S);
  std::int64_t sj = static_cast<std::int64_t>(J.edge_count());  // all spins -1
  std::uint32_t s = 0;
  for (std::uint32_t t = 0;; ++t) {
    const int M = 2 * std::popcount(s) - n;
    energy_[s] = -static_cast<double>(sj) / np - params.h * M;
    if (t + 1 == S) break;
    const int l = std::countr_zero(t + 1);
    const int sl = ((s >> l) & 1u) ? 1 : -1;
    const int k = 2 * std::popcount(rows[l] & s) - deg[l];
    sj -= 2 * sl * k;
    s ^= 1u << l;
  }

  LogSum lz;
  for (std::uint32_t x = 0; x < S; ++x) lz.add(log_mu(x));
  log_Z_ = lz.value();
  mu_.resize(S);
  for (std::uint32_t x = 0; x < S; ++x) mu_[x] = std::exp(log_mu(x) - log_Z_);

  P_.resize(static_cast<std::size_t>(S) * n);
  leave_.resize(S);
  levels_.assign(n + 1, {});
  for (std::uint32_t x = 0; x < S; ++x) {
    CompensatedSum out;
    for (int l = 0; l < n; ++l) {
      const int sl = ((x >> l) & 1u) ? 1 : -1;
      const int k = 2 * std::popcount(rows[l] & x) - deg[l];
      const double dH = rdcw_increment(sl, k, np, params.h);
      const double pr = std::exp(-params.beta * std::max(dH, 0.0)) / n;
      P_[static_cast<std::size_t>(x) * n + l] = pr;
      out.add(pr);
    }
    leave_[x] = out.value();
    levels_[level(x)].push_back(x);
  }
}

namespace {

void check_levels(const ExactChain& c, int kA, int kB) {
  require(kA >= 0 && kA <= c.N() && kB >= 0 && kB <= c.N(), "level off the grid");
  require(kA != kB, "A and B must be different levels");
}

// Solves x = P x + b off the boundary (x = 0 on it), i.e. (I - P_II) x_I = b_I.
LinearSolution solve_dirichlet(const ExactChain& c, const std::vector<char>& boundary,
                               const std::vector<double>& b) {
  const int n = c.N();
  const std::uint32_t S = c.states();
  double max_log = kNegInf;
  for (std::uint32_t s = 0; s < S; ++s) max_log = std::max(max_log, c.log_mu(s));
  std::vector<double> w(S), diag(S, 0.0), bw(S, 0.0);
  double bnorm = 0.0;
  for (std::uint32_t s = 0; s < S; ++s) {
    w[s] = std::exp(c.log_mu(s) - max_log);
    if (!boundary[s]) {
      diag[s] = w[s] * c.leave(s);
      bw[s] = w[s] * b[s];
      bnorm = std::max(bnorm, std::abs(b[s]));
    }
  }
  LinearSolution out;
  out.x.assign(S, 0.0);
  if (bnorm == 0.0) {
    out.info = {"trivial", 0, 0.0};
    return out;
  }

  // Gibbs-weighted operator: mu (I - P), symmetric by reversibility.
  MatVec A = [&](std::span<const double> x, std::span<double> y) {
    for (std::uint32_t s = 0; s < S; ++s) {
      if (boundary[s]) {
        y[s] = 0.0;
        continue;
      }
      double acc = c.leave(s) * x[s];
      for (int l = 0; l < n; ++l) {
        const std::uint32_t t = s ^ (1u << l);
        if (!boundary[t]) acc -= c.prob(s, l) * x[t];
      }
      y[s] = w[s] * acc;
    }
  };
  auto norm = [&](std::span<const double> r) {
    double m = 0.0;
    for (std::uint32_t s = 0; s < S; ++s)
      if (!boundary[s]) m = std::max(m, std::abs(r[s] / w[s]));
    return m / bnorm;
  };

  const auto& opt = c.options();
  CgResult cg = pcg(A, diag, bw, out.x, opt.tol, opt.max_iter, norm);
  out.info = {"pcg", cg.iterations, cg.residual};
  if (cg.residual <= opt.accept) return out;

  if (!(opt.dense_fallback && n <= 12))
    fail(Errc::SolverError, "conjugate gradient stalled at relative residual " + std::to_string(cg.residual));

  std::vector<int> index(S, -1);
  std::vector<std::uint32_t> inner;
  for (std::uint32_t s = 0; s < S; ++s)
    if (!boundary[s]) {
      index[s] = static_cast<int>(inner.size());
      inner.push_back(s);
    }
  const int m = static_cast<int>(inner.size());
  std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0), rhs(m);
  for (int i = 0; i < m; ++i) {
    const std::uint32_t s = inner[i];
    M[static_cast<std::size_t>(i) * m + i] = c.leave(s);
    for (int l = 0; l < n; ++l) {
      const std::uint32_t t = s ^ (1u << l);
      if (index[t] >= 0) M[static_cast<std::size_t>(i) * m + index[t]] -= c.prob(s, l);
    }
    rhs[i] = b[s];
  }
  std::vector<double> sol = dense_lu_solve(M, m, rhs);
  std::fill(out.x.begin(), out.x.end(), 0.0);
  for (int i = 0; i < m; ++i) out.x[inner[i]] = sol[i];
  std::vector<double> r(S), y(S);
  A(out.x, y);
  for (std::uint32_t s = 0; s < S; ++s) r[s] = bw[s] - y[s];
  double res = norm(r);
  out.info = {"dense-lu", cg.iterations, res};
  if (res > opt.accept)
    fail(Errc::SolverError, "dense fallback residual " + std::to_string(res) + " above tolerance");
  return out;
}

// Probability of one step into `target`.
std::vector<double> step_into(const ExactChain& c, const std::vector<char>& target) {
  const std::uint32_t S = c.states();
  std::vector<double> b(S, 0.0);
  for (std::uint32_t s = 0; s < S; ++s) {
    CompensatedSum acc;
    for (int l = 0; l < c.N(); ++l)
      if (target[s ^ (1u << l)]) acc.add(c.prob(s, l));
    b[s] = acc.value();
  }
  return b;
}

std::vector<char> level_mask(const ExactChain& c, int k) {
  std::vector<char> m(c.states(), 0);
  for (auto s : c.level_states(k)) m[s] = 1;
  return m;
}

void clamp_unit(std::vector<double>& v) {
  for (double& x : v) {
    if (x < 0.0 && x > -1e-9) x = 0.0;
    if (x > 1.0 && x < 1.0 + 1e-9) x = 1.0;
  }
}

}  // namespace

PairSolve harmonic_function(const ExactChain& c, int kA, int kB) {
  check_levels(c, kA, kB);
  const std::vector<char> inA = level_mask(c, kA), inB = level_mask(c, kB);
  std::vector<char> boundary(c.states());
  for (std::uint32_t s = 0; s < c.states(); ++s) boundary[s] = inA[s] || inB[s];

  PairSolve ps;
  ps.kA = kA;
  ps.kB = kB;
  LinearSolution hab = solve_dirichlet(c, boundary, step_into(c, inA));
  LinearSolution eba = solve_dirichlet(c, boundary, step_into(c, inB));
  ps.h_AB = std::move(hab.x);
  ps.e_BA = std::move(eba.x);
  ps.info_AB = hab.info;
  ps.info_BA = eba.info;
  for (std::uint32_t s = 0; s < c.states(); ++s) {
    if (inA[s]) {
      ps.h_AB[s] = 1.0;
      ps.e_BA[s] = 0.0;
    } else if (inB[s]) {
      ps.h_AB[s] = 0.0;
      ps.e_BA[s] = 1.0;
    }
  }
  clamp_unit(ps.h_AB);
  clamp_unit(ps.e_BA);
  for (std::uint32_t s = 0; s < c.states(); ++s)
    ps.complement_defect = std::max(ps.complement_defect, std::abs(ps.h_AB[s] + ps.e_BA[s] - 1.0));
  return ps;
}

std::vector<double> escape_probabilities(const ExactChain& c, const PairSolve& ps) {
  const auto& A = c.level_states(ps.kA);
  std::vector<double> esc(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    CompensatedSum acc;
    for (int l = 0; l < c.N(); ++l) acc.add(c.prob(A[i], l) * ps.e_BA[A[i] ^ (1u << l)]);
    esc[i] = acc.value();
  }
  return esc;
}

ExactCapacity capacity_exact(const ExactChain& c, const PairSolve& ps) {
  const auto& A = c.level_states(ps.kA);
  const std::vector<double> esc = escape_probabilities(c, ps);
  CompensatedSum cap;
  for (std::size_t i = 0; i < A.size(); ++i) cap.add(c.mu(A[i]) * esc[i]);

  CompensatedSum dir;
  for (std::uint32_t s = 0; s < c.states(); ++s)
    for (int l = 0; l < c.N(); ++l) {
      const std::uint32_t t = s | (1u << l);
      if (t == s) continue;  // each unordered edge once
      const double d = ps.e_BA[s] - ps.e_BA[t];
      if (d != 0.0) dir.add(c.mu(s) * c.prob(s, l) * d * d);
    }

  ExactCapacity out{};
  out.cap = cap.value();
  out.log_cap = std::log(out.cap);
  out.log_Zcap = out.log_cap + c.log_Z();
  out.cap_dirichlet = dir.value();
  return out;
}

LastExit last_exit_distribution(const ExactChain& c, const PairSolve& ps) {
  LastExit le;
  le.states = c.level_states(ps.kA);
  const std::vector<double> esc = escape_probabilities(c, ps);
  le.prob.resize(esc.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < esc.size(); ++i) {
    le.prob[i] = c.mu(le.states[i]) * esc[i];
    total.add(le.prob[i]);
  }
  if (!(total.value() > 0.0)) fail(Errc::SolverError, "all escape probabilities vanish");
  for (double& p : le.prob) p /= total.value();
  return le;
}

LinearSolution hitting_times(const ExactChain& c, int kB) {
  require(kB >= 0 && kB <= c.N(), "target level off the grid");
  const std::vector<char> inB = level_mask(c, kB);
  LinearSolution sol = solve_dirichlet(c, inB, std::vector<double>(c.states(), 1.0));
  // first-positive convention inside B: one step, then the hitting time from there
  for (auto s : c.level_states(kB)) {
    CompensatedSum acc;
    acc.add(1.0);
    for (int l = 0; l < c.N(); ++l) acc.add(c.prob(s, l) * sol.x[s ^ (1u << l)]);
    sol.x[s] = acc.value();
  }
  return sol;
}

double harmonic_sum(const ExactChain& c, const PairSolve& ps) {
  CompensatedSum acc;
  for (std::uint32_t s = 0; s < c.states(); ++s) acc.add(c.mu(s) * ps.h_AB[s]);
  return acc.value();
}

MeanHitting mean_hitting_exact(const ExactChain& c, const PairSolve& ps) {
  LinearSolution hit = hitting_times(c, ps.kB);
  const LastExit nu = last_exit_distribution(c, ps);
  MeanHitting mh;
  CompensatedSum direct;
  for (std::size_t i = 0; i < nu.states.size(); ++i) direct.add(nu.prob[i] * hit.x[nu.states[i]]);
  mh.tau_nu_direct = direct.value();
  mh.harmonic_sum = harmonic_sum(c, ps);
  mh.tau_nu_capacity = mh.harmonic_sum / capacity_exact(c, ps).cap;
  mh.tau = std::move(hit.x);
  mh.info = hit.info;
  return mh;
}

MesoMeasure meso_measure(const ExactChain& c) {
  MesoMeasure m;
  m.Q.assign(c.N() + 1, 0.0);
  for (int k = 0; k <= c.N(); ++k) {
    CompensatedSum acc;
    for (auto s : c.level_states(k)) acc.add(c.mu(s));
    m.Q[k] = acc.value();
  }
  return m;
}

}  // namespace metastab
