#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace metastab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// log(e^a + e^b), safe for -inf.
double log_add(double a, double b);
double logsumexp(std::span<const double> xs);

double log_binom(int n, int k);
double log_factorial(int n);

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Streaming log-sum-exp: value() = log sum exp(x_i).
class LogSum {
 public:
  void add(double log_x);
  double value() const;

 private:
  double shift_ = kNegInf;
  CompensatedSum acc_;
};

}  // namespace metastab
