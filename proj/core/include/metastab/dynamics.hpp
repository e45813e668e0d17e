#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metastab/disorder.hpp"
#include "metastab/exact_chain.hpp"
#include "metastab/params.hpp"
#include "metastab/rng.hpp"
#include "metastab/spin.hpp"

namespace metastab {

// Dense adjacency rows shared read-only by every trajectory on one disorder sample.
class Adjacency {
 public:
  explicit Adjacency(const Disorder& J);
  int size() const { return n_; }
  std::size_t words() const { return words_; }
  const std::uint64_t* row(int i) const { return rows_.data() + static_cast<std::size_t>(i) * words_; }

 private:
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

// k_l = sum_i J_il s_i for every site, kept in sync with the spins.
class LocalFieldCache {
 public:
  LocalFieldCache(const SpinConfig& s, const Adjacency& adj);
  int field(int l) const { return fields_[l]; }
  const std::vector<int>& fields() const { return fields_; }
  // Call before flipping site l, with its current spin.
  void on_flip(int l, int old_spin, const Adjacency& adj);

 private:
  std::vector<int> fields_;
};

std::vector<int> local_fields(const SpinConfig& s, const Disorder& J);

struct McState {
  SpinConfig spins;
  LocalFieldCache cache;

  McState(SpinConfig s, const Adjacency& adj) : spins(std::move(s)), cache(spins, adj) {}
};

// One Metropolis step: uniform site, accept with exp(-beta [dH]_+). Returns the accepted flag.
bool mc_step(McState& st, const Adjacency& adj, const ModelParams& params, Rng& rng);

// Uniform configuration with k plus spins.
SpinConfig sample_on_level(int k, int N, Rng& rng);
// Magnetisation form; m must be on the grid.
SpinConfig sample_on_level(double m, int N, Rng& rng);

enum class StartSampler { UniformOnLevel, ExactNu };

struct StartSpec {
  int level = 0;
  StartSampler sampler = StartSampler::UniformOnLevel;
};

struct HittingEstimate {
  double mean = 0.0;
  double ci95 = 0.0;  // half width, normal approximation over completed runs
  int completed = 0;
  int timeouts = 0;
  std::vector<std::int64_t> times;  // -1 marks a timeout
};

struct HittingJob {
  ModelParams params;
  StartSpec start;
  int target_level = 0;
  int trajectories = 10;
  std::int64_t step_cap = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t replica = 0;
};

// Hitting time of the target level, counted from t = 1 (a start on the target level measures the
// return time). ExactNu needs `nu`, the last-exit distribution for (start.level, target_level).
HittingEstimate estimate_hitting(const HittingJob& job, const Disorder& J,
                                 const LastExit* nu = nullptr);

// Single trajectory, as used by estimate_hitting; returns -1 on timeout.
std::int64_t run_trajectory(McState& st, const Adjacency& adj, const ModelParams& params, int target_level,
                            std::int64_t step_cap, Rng& rng);

}  // namespace metastab
