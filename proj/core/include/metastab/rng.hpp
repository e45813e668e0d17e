#pragma once

#include <cstdint>
#include <random>

namespace metastab {

// Purpose tags keep disorder, dynamics and sampling streams disjoint.
enum class StreamTag : std::uint64_t {
  Disorder = 0x1d15,
  Dynamics = 0xd1a7,
  Sampling = 0x5a3f,
  Bootstrap = 0xb007,
};

std::uint64_t splitmix64(std::uint64_t x);

// Key of the stream (master, tag, replica, sub). Distinct tuples give unrelated keys.
std::uint64_t stream_key(std::uint64_t master, StreamTag tag, std::uint64_t replica,
                         std::uint64_t sub = 0);

// mt19937_64 keyed by a stream tuple. Draws are converted by hand rather than through
// <random> distributions so the numbers are identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : engine_(key) {}
  static Rng stream(std::uint64_t master, StreamTag tag, std::uint64_t replica,
                    std::uint64_t sub = 0) {
    return Rng(stream_key(master, tag, replica, sub));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0 (Lemire's nearly divisionless method).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace metastab
