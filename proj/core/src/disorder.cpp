#include "metastab/disorder.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "metastab/error.hpp"
#include "metastab/rng.hpp"

namespace metastab {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) fail(Errc::IoError, "truncated disorder header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Disorder::Disorder(int n, double p, std::uint64_t seed, std::vector<std::uint64_t> packed)
    : n_(n), p_(p), seed_(seed), bits_(std::move(packed)) {
  require(n >= 2, "Disorder needs n >= 2");
  require(p > 0.0 && p <= 1.0, "Disorder needs p in (0,1]");
  std::uint64_t pairs = pair_count(n);
  require(bits_.size() == (pairs + 63) / 64, "packed triangle has the wrong length");
  if (pairs % 64 != 0)
    require((bits_.back() >> (pairs % 64)) == 0, "padding bits of the triangle must be zero");
  for (auto w : bits_) edge_count_ += static_cast<std::uint64_t>(std::popcount(w));
}

Disorder Disorder::sample(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  std::uint64_t pairs = pair_count(params.N);
  std::vector<std::uint64_t> bits((pairs + 63) / 64, 0);
  Rng rng = Rng::stream(seed, StreamTag::Disorder, 0);
  for (std::uint64_t t = 0; t < pairs; ++t)
    if (rng.uniform() < params.p) bits[t >> 6] |= 1ULL << (t & 63);
  return Disorder(params.N, params.p, seed, std::move(bits));
}

std::uint64_t Disorder::index(int i, int j) const {
  auto ui = static_cast<std::uint64_t>(i);
  return ui * (2 * static_cast<std::uint64_t>(n_) - ui - 1) / 2 + static_cast<std::uint64_t>(j - i - 1);
}

bool Disorder::coupled(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  std::uint64_t t = index(i, j);
  return (bits_[t >> 6] >> (t & 63)) & 1ULL;
}

int Disorder::degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j) d += coupled(i, j);
  return d;
}

std::vector<std::uint64_t> Disorder::dense_rows() const {
  std::size_t rw = row_words();
  std::vector<std::uint64_t> rows(rw * static_cast<std::size_t>(n_), 0);
  std::uint64_t t = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++t)
      if ((bits_[t >> 6] >> (t & 63)) & 1ULL) {
        rows[i * rw + (j >> 6)] |= 1ULL << (j & 63);
        rows[j * rw + (i >> 6)] |= 1ULL << (i & 63);
      }
  return rows;
}

std::vector<std::uint64_t> Disorder::row_masks() const {
  require(n_ <= 64, "row_masks() needs n <= 64");
  return dense_rows();
}

void Disorder::write(std::ostream& os) const {
  put_u64(os, static_cast<std::uint64_t>(n_));
  std::uint64_t pbits;
  std::memcpy(&pbits, &p_, sizeof pbits);
  put_u64(os, pbits);
  put_u64(os, seed_);
  put_u64(os, edge_count_);
  std::uint64_t pairs = pair_count(n_);
  for (std::uint64_t byte = 0; byte < (pairs + 7) / 8; ++byte) {
    auto c = static_cast<unsigned char>(bits_[byte / 8] >> (8 * (byte % 8)));
    os.put(static_cast<char>(c));
  }
  if (!os) fail(Errc::IoError, "failed writing disorder");
}

Disorder Disorder::read(std::istream& is) {
  std::uint64_t n = get_u64(is);
  std::uint64_t pbits = get_u64(is);
  double p;
  std::memcpy(&p, &pbits, sizeof p);
  std::uint64_t seed = get_u64(is);
  std::uint64_t edges = get_u64(is);
  if (n < 2 || n > (1ULL << 20)) fail(Errc::IoError, "implausible N in disorder header");
  std::uint64_t pairs = pair_count(static_cast<int>(n));
  std::vector<std::uint64_t> bits((pairs + 63) / 64, 0);
  for (std::uint64_t byte = 0; byte < (pairs + 7) / 8; ++byte) {
    int c = is.get();
    if (c == std::char_traits<char>::eof()) fail(Errc::IoError, "truncated disorder triangle");
    bits[byte / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (byte % 8));
  }
  Disorder d(static_cast<int>(n), p, seed, std::move(bits));
  if (d.edge_count() != edges) fail(Errc::IoError, "edge_count does not match the triangle");
  return d;
}

void Disorder::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::IoError, "cannot open " + path.string());
  write(os);
}

Disorder Disorder::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::IoError, "cannot open " + path.string());
  return read(is);
}

}  // namespace metastab
