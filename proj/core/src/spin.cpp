#include "metastab/spin.hpp"

#include <bit>

#include "metastab/error.hpp"

namespace metastab {

namespace {
std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }
}  // namespace

SpinConfig SpinConfig::all_minus(int n) {
  require(n >= 1, "SpinConfig needs n >= 1");
  SpinConfig s;
  s.n_ = n;
  s.bits_.assign(words_for(n), 0);
  s.spin_sum_ = -n;
  return s;
}

SpinConfig SpinConfig::all_plus(int n) {
  SpinConfig s = all_minus(n);
  for (int i = 0; i < n; ++i) s.bits_[i >> 6] |= 1ULL << (i & 63);
  s.spin_sum_ = n;
  return s;
}

SpinConfig SpinConfig::from_spins(std::span<const int> spins) {
  SpinConfig s = all_minus(static_cast<int>(spins.size()));
  for (std::size_t i = 0; i < spins.size(); ++i) {
    require(spins[i] == 1 || spins[i] == -1, "spins must be +1 or -1");
    if (spins[i] == 1) s.flip(static_cast<int>(i));
  }
  return s;
}

SpinConfig SpinConfig::from_mask(std::uint64_t mask, int n) {
  require(n >= 1 && n <= 64, "from_mask needs 1 <= n <= 64");
  SpinConfig s = all_minus(n);
  if (n < 64) mask &= (1ULL << n) - 1;
  s.bits_[0] = mask;
  s.spin_sum_ = 2 * std::popcount(mask) - n;
  return s;
}

void SpinConfig::flip(int i) {
  std::uint64_t bit = 1ULL << (i & 63);
  std::uint64_t& w = bits_[static_cast<std::size_t>(i) >> 6];
  spin_sum_ += (w & bit) ? -2 : 2;
  w ^= bit;
}

void SpinConfig::set(int i, int s) {
  if (spin(i) != s) flip(i);
}

std::uint64_t SpinConfig::mask() const {
  require(n_ <= 64, "mask() needs n <= 64");
  return bits_.empty() ? 0 : bits_[0];
}

int SpinConfig::recount() const {
  int up = 0;
  for (auto w : bits_) up += std::popcount(w);
  return 2 * up - n_;
}

}  // namespace metastab
