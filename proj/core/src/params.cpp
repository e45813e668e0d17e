#include "metastab/params.hpp"

#include <cmath>
#include <string>

#include "metastab/error.hpp"

namespace metastab {

void ModelParams::validate() const {
  require(N >= 2, "N must be >= 2, got " + std::to_string(N));
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(std::isfinite(h), "h must be finite");
  require(p > 0.0 && p <= 1.0, "p must lie in (0,1]");
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.N == b.N && a.beta == b.beta && a.h == b.h && a.p == b.p;
}

}  // namespace metastab
