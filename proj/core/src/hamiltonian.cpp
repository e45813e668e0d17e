#include "metastab/hamiltonian.hpp"

#include <bit>
#include <string>

#include "metastab/error.hpp"

namespace metastab {

namespace {

void check_dims(const SpinConfig& s, const Disorder& J) {
  if (s.size() != J.size())
    fail(Errc::InvalidArgument, "dimension mismatch: config has " + std::to_string(s.size()) +
                                    " spins, disorder has " + std::to_string(J.size()));
}

void check_dims(const SpinConfig& s, const Disorder& J, const ModelParams& params) {
  check_dims(s, J);
  if (params.N != s.size()) fail(Errc::InvalidArgument, "dimension mismatch with params.N");
}

}  // namespace

std::int64_t coupled_pair_sum(const SpinConfig& s, const Disorder& J) {
  check_dims(s, J);
  std::int64_t total = 0;
  const int n = s.size();
  const auto& tri = J.packed();
  std::uint64_t t = 0;
  for (int i = 0; i < n; ++i) {
    int si = s.spin(i);
    for (int j = i + 1; j < n; ++j, ++t)
      if ((tri[t >> 6] >> (t & 63)) & 1ULL) total += si * s.spin(j);
  }
  return total;
}

std::int64_t pair_sum(const SpinConfig& s) {
  std::int64_t m = s.spin_sum();
  return (m * m - s.size()) / 2;
}

int local_field(const SpinConfig& s, const Disorder& J, int site) {
  check_dims(s, J);
  if (site < 0 || site >= s.size()) fail(Errc::InvalidArgument, "site out of range");
  int k = 0;
  for (int i = 0; i < s.size(); ++i)
    if (J.coupled(i, site)) k += s.spin(i);
  return k;
}

double hamiltonian_rdcw(const SpinConfig& s, const Disorder& J, const ModelParams& params) {
  check_dims(s, J, params);
  const double np = params.N * params.p;
  return -static_cast<double>(coupled_pair_sum(s, J)) / np - params.h * s.spin_sum();
}

double hamiltonian_cw_canonical(double m, double h, int n) {
  require(m >= -1.0 && m <= 1.0, "magnetisation outside [-1,1]");
  return n * cw_energy_density(m, h);
}

double hamiltonian_cw_pairsum(const SpinConfig& s, double h) {
  return -static_cast<double>(pair_sum(s)) / s.size() - h * s.spin_sum();
}

double delta_term(const SpinConfig& s, const Disorder& J, const ModelParams& params) {
  check_dims(s, J, params);
  const double np = params.N * params.p;
  const double sj = static_cast<double>(coupled_pair_sum(s, J));
  const double sp = static_cast<double>(pair_sum(s));
  return -(sj - params.p * sp) / np;
}

FlipIncrement flip_increment(const SpinConfig& s, const Disorder& J, const ModelParams& params,
                             int site) {
  check_dims(s, J, params);
  const int k = local_field(s, J, site);
  const int sl = s.spin(site);
  return {rdcw_increment(sl, k, params.N * params.p, params.h),
          cw_increment(sl, s.spin_sum(), params.N, params.h)};
}

}  // namespace metastab
