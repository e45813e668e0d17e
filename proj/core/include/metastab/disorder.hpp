#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "metastab/params.hpp"

namespace metastab {

// Symmetric 0/1 couplings with zero diagonal. Only the upper triangle is stored,
// one bit per pair (i<j) in row-major order.
class Disorder {
 public:
  Disorder(int n, double p, std::uint64_t seed, std::vector<std::uint64_t> packed);

  static Disorder sample(const ModelParams& params, std::uint64_t seed);

  int size() const { return n_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t edge_count() const { return edge_count_; }

  bool coupled(int i, int j) const;  // J_ij; false on the diagonal
  int degree(int i) const;

  // Full adjacency rows as bitsets: row i occupies words [i*row_words(), (i+1)*row_words()).
  std::size_t row_words() const { return (static_cast<std::size_t>(n_) + 63) / 64; }
  std::vector<std::uint64_t> dense_rows() const;
  // Single-word rows, n <= 64.
  std::vector<std::uint64_t> row_masks() const;

  const std::vector<std::uint64_t>& packed() const { return bits_; }

  // Binary container: u64 N, f64 p, u64 seed, u64 edge_count, then the triangle
  // bytes (pair t is bit t%8 of byte t/8). Everything little-endian.
  void write(std::ostream& os) const;
  static Disorder read(std::istream& is);
  void save(const std::filesystem::path& path) const;
  static Disorder load(const std::filesystem::path& path);

  bool operator==(const Disorder& o) const {
    return n_ == o.n_ && p_ == o.p_ && seed_ == o.seed_ && bits_ == o.bits_;
  }

  static std::uint64_t pair_count(int n) {
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  }

 private:
  std::uint64_t index(int i, int j) const;  // requires i < j

  int n_ = 0;
  double p_ = 1.0;
  std::uint64_t seed_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline Disorder sample_disorder(const ModelParams& params, std::uint64_t seed) {
  return Disorder::sample(params, seed);
}

}  // namespace metastab
