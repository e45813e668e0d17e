#include "metastab/numeric.hpp"

#include <algorithm>

namespace metastab {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double logsumexp(std::span<const double> xs) {
  LogSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binom(int n, int k) {
  if (k < 0 || k > n) return kNegInf;
  if (k == 0 || k == n) return 0.0;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

void LogSum::add(double log_x) {
  if (log_x == kNegInf) return;
  if (log_x > shift_) {
    // rescale what we have so far
    double scale = (shift_ == kNegInf) ? 0.0 : std::exp(shift_ - log_x);
    CompensatedSum rescaled;
    rescaled.add(acc_.value() * scale);
    acc_ = rescaled;
    shift_ = log_x;
  }
  acc_.add(std::exp(log_x - shift_));
}

double LogSum::value() const {
  if (shift_ == kNegInf) return kNegInf;
  return shift_ + std::log(acc_.value());
}

}  // namespace metastab
