#pragma once

namespace metastab {

// Critical inverse temperature of the mean-field model.
inline constexpr double kBetaCritical = 1.0;

struct ModelParams {
  int N = 12;
  double beta = 1.5;
  double h = 0.1;
  double p = 0.5;  // p = 1 is the complete graph (pure Curie-Weiss)

  // Throws Errc::InvalidArgument. beta = 0 is admitted for infinite-temperature checks.
  void validate() const;
};

bool operator==(const ModelParams& a, const ModelParams& b);

}  // namespace metastab
