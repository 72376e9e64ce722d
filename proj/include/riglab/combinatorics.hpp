#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace riglab {

using count_t = std::uint64_t;

// Exact C(n, k) when it fits in 63 bits, otherwise nullopt.
std::optional<count_t> choose_exact(count_t n, count_t k);

// log C(n, k); -inf when k > n. Small k goes through the exact product,
// large k through a Stirling form that never subtracts two large logs, so
// the result stays accurate for n up to ~1e18.
double log_choose(count_t n, count_t k);

// C(n, k) as a double. Exact whenever the value is below 2^53.
double choose(count_t n, count_t k);

// (x)_k = x (x-1) ... (x-k+1). Throws std::overflow_error past 64 bits.
count_t falling_factorial(count_t x, count_t k);

// Same product in floating point; used for moments where values can be huge.
double falling_factorial_real(double x, unsigned k);

double poisson_pmf(count_t k, double mean);

// P(N > k) for N ~ Poisson(mean).
double poisson_upper_tail(count_t k, double mean);

double binomial_pmf(count_t k, count_t trials, double p);

// P(B > k) for B ~ Binomial(trials, p).
double binomial_upper_tail(count_t k, count_t trials, double p);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace riglab
