#include "metastab/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "metastab/error.hpp"
#include "metastab/hamiltonian.hpp"
#include "metastab/landscape.hpp"
#include "metastab/numeric.hpp"
#include "metastab/parallel.hpp"

namespace metastab {

Adjacency::Adjacency(const Disorder& J) : n_(J.size()), words_(J.row_words()), rows_(J.dense_rows()) {}

LocalFieldCache::LocalFieldCache(const SpinConfig& s, const Adjacency& adj) : fields_(adj.size(), 0) {
  require(s.size() == adj.size(), "spin configuration and disorder sizes differ");
  const auto& w = s.words();
  for (int l = 0; l < adj.size(); ++l) {
    const std::uint64_t* row = adj.row(l);
    int deg = 0, up = 0;
    for (std::size_t q = 0; q < adj.words(); ++q) {
      deg += std::popcount(row[q]);
      up += std::popcount(row[q] & w[q]);
    }
    fields_[l] = 2 * up - deg;
  }
}

void LocalFieldCache::on_flip(int l, int old_spin, const Adjacency& adj) {
  const std::uint64_t* row = adj.row(l);
  const int d = -2 * old_spin;
  for (std::size_t q = 0; q < adj.words(); ++q) {
    for (std::uint64_t b = row[q]; b; b &= b - 1) fields_[q * 64 + std::countr_zero(b)] += d;
  }
}

std::vector<int> local_fields(const SpinConfig& s, const Disorder& J) {
  std::vector<int> out(J.size());
  for (int l = 0; l < J.size(); ++l) out[l] = local_field(s, J, l);
  return out;
}

bool mc_step(McState& st, const Adjacency& adj, const ModelParams& P, Rng& rng) {
  const int N = adj.size();
  const int l = static_cast<int>(rng.below(N));
  const int sl = st.spins.spin(l);
  const double dH = rdcw_increment(sl, st.cache.field(l), N * P.p, P.h);
  // Always draw, so the stream position does not depend on the sign of dH.
  const double u = rng.uniform();
  if (dH > 0.0 && !(u < std::exp(-P.beta * dH))) return false;
  st.cache.on_flip(l, sl, adj);
  st.spins.flip(l);
  return true;
}

SpinConfig sample_on_level(int k, int N, Rng& rng) {
  require(N >= 1 && k >= 0 && k <= N, "level off the grid");
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(N - i)]);
  std::vector<int> spins(N, -1);
  for (int i = 0; i < k; ++i) spins[idx[i]] = 1;
  return SpinConfig::from_spins(spins);
}

SpinConfig sample_on_level(double m, int N, Rng& rng) {
  return sample_on_level(MagGrid{N}.level_of(m), N, rng);
}

std::int64_t run_trajectory(McState& st, const Adjacency& adj, const ModelParams& P, int target_level,
                            std::int64_t cap, Rng& rng) {
  for (std::int64_t t = 1; t <= cap; ++t) {
    mc_step(st, adj, P, rng);
    if (st.spins.up_count() == target_level) return t;
  }
  return -1;
}

HittingEstimate estimate_hitting(const HittingJob& job, const Disorder& J, const LastExit* nu) {
  const ModelParams& P = job.params;
  P.validate();
  require(J.size() == P.N, "disorder and parameters disagree on N");
  if (job.trajectories < 10) fail(Errc::InvalidArgument, "need at least 10 trajectories");
  if (job.step_cap < 1) fail(Errc::InvalidArgument, "step cap must be positive");
  require(job.target_level >= 0 && job.target_level <= P.N, "target level off the grid");
  require(job.start.level >= 0 && job.start.level <= P.N, "start level off the grid");

  std::vector<double> cdf;
  if (job.start.sampler == StartSampler::ExactNu) {
    if (!nu || nu->states.empty()) fail(Errc::InvalidArgument, "exact-nu start needs the last-exit distribution");
    cdf.resize(nu->prob.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += nu->prob[i]);
    for (auto s : nu->states)
      require(ExactChain::level(s) == job.start.level, "last-exit distribution is not on the start level");
  }

  const Adjacency adj(J);
  HittingEstimate est;
  est.times.assign(job.trajectories, -1);
  parallel_for(job.trajectories, [&](std::size_t t) {
    Rng start_rng = Rng::stream(job.master_seed, StreamTag::Sampling, job.replica, t);
    SpinConfig s0;
    if (job.start.sampler == StartSampler::ExactNu) {
      const double u = start_rng.uniform() * cdf.back();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const std::size_t i = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
      s0 = SpinConfig::from_mask(nu->states[i], P.N);
    } else {
      s0 = sample_on_level(job.start.level, P.N, start_rng);
    }
    McState st(std::move(s0), adj);
    Rng rng = Rng::stream(job.master_seed, StreamTag::Dynamics, job.replica, t);
    est.times[t] = run_trajectory(st, adj, P, job.target_level, job.step_cap, rng);
  });

  CompensatedSum sum;
  for (auto x : est.times) {
    if (x < 0) {
      ++est.timeouts;
    } else {
      ++est.completed;
      sum.add(static_cast<double>(x));
    }
  }
  if (est.completed == 0) fail(Errc::AllTimedOut, "every trajectory hit the step cap");
  est.mean = sum.value() / est.completed;
  if (est.completed > 1) {
    CompensatedSum q;
    for (auto x : est.times)
      if (x >= 0) q.add((x - est.mean) * (x - est.mean));
    est.ci95 = 1.96 * std::sqrt(q.value() / (est.completed - 1) / est.completed);
  }
  return est;
}

}  // namespace metastab
