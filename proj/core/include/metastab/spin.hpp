#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace metastab {

// N spins, bit-packed (bit set = +1), with a cached spin sum.
class SpinConfig {
 public:
  SpinConfig() = default;

  static SpinConfig all_minus(int n);
  static SpinConfig all_plus(int n);
  static SpinConfig from_spins(std::span<const int> spins);  // entries must be +1/-1
  static SpinConfig from_mask(std::uint64_t mask, int n);   // n <= 64

  int size() const { return n_; }
  int spin(int i) const { return up(i) ? 1 : -1; }
  bool up(int i) const { return (bits_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ULL; }
  void flip(int i);
  void set(int i, int s);

  int spin_sum() const { return spin_sum_; }
  int up_count() const { return (n_ + spin_sum_) / 2; }
  double magnetization() const { return static_cast<double>(spin_sum_) / n_; }

  std::uint64_t mask() const;  // n <= 64
  const std::vector<std::uint64_t>& words() const { return bits_; }

  // Recomputes the sum from the bits; used to check the cache.
  int recount() const;

  bool operator==(const SpinConfig& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  int n_ = 0;
  int spin_sum_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline double magnetization(const SpinConfig& s) { return s.magnetization(); }

}  // namespace metastab
