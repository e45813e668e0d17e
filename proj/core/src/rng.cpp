#include "metastab/rng.hpp"

namespace metastab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t master, StreamTag tag, std::uint64_t replica,
                         std::uint64_t sub) {
  std::uint64_t k = splitmix64(master);
  k = splitmix64(k ^ static_cast<std::uint64_t>(tag));
  k = splitmix64(k ^ replica);
  k = splitmix64(k ^ (sub * 0xff51afd7ed558ccdULL));
  return k;
}

namespace {
__extension__ using u128 = unsigned __int128;
}

std::uint64_t Rng::below(std::uint64_t n) {
  u128 m = static_cast<u128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace metastab
