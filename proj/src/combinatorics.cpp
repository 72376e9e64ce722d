#include "riglab/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace riglab {

namespace {

constexpr count_t kExactLimit = count_t{1} << 63;
constexpr double kTwoPow53 = 9007199254740992.0;

// log n! - [0.5 log(2 pi n) + n log n - n]
double stirling_error(double n) {
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (0.5 * std::log(2.0 * std::numbers::pi * n) +
                                   n * std::log(n) - n);
  }
  const double n2 = n * n;
  return (1.0 / 12.0 -
          (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0) / n2) / n2) / n2) /
         n;
}

}  // namespace

std::optional<count_t> choose_exact(count_t n, count_t k) {
  if (k > n) return count_t{0};
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (count_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r >= kExactLimit) return std::nullopt;
  }
  return static_cast<count_t>(r);
}

double log_choose(count_t n, count_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  k = std::min(k, n - k);
  if (k == 0) return 0.0;
  if (k <= 64) {
    if (auto exact = choose_exact(n, k)) {
      return std::log(static_cast<double>(*exact));
    }
    CompensatedSum sum;
    for (count_t i = 1; i <= k; ++i) {
      sum += std::log(static_cast<double>(n - k + i) / static_cast<double>(i));
    }
    return sum.value();
  }
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double rest = static_cast<double>(n - k);
  return 0.5 * std::log(nn / (2.0 * std::numbers::pi * kk * rest)) +
         kk * std::log(nn / kk) - rest * std::log1p(-kk / nn) +
         stirling_error(nn) - stirling_error(kk) - stirling_error(rest);
}

double choose(count_t n, count_t k) {
  if (k > n) return 0.0;
  if (auto exact = choose_exact(n, k)) {
    const double v = static_cast<double>(*exact);
    if (v < kTwoPow53) return v;
  }
  return std::exp(log_choose(n, k));
}

count_t falling_factorial(count_t x, count_t k) {
  if (k > x) return 0;
  count_t r = 1;
  for (count_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, x - i, &r)) {
      throw std::overflow_error("falling_factorial: result exceeds 64 bits");
    }
  }
  return r;
}

double falling_factorial_real(double x, unsigned k) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= (x - i);
  return r;
}

double poisson_pmf(count_t k, double mean) {
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(mean),
                          static_cast<double>(k));
}

double poisson_upper_tail(count_t k, double mean) {
  if (mean <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::complement(
      boost::math::poisson_distribution<double>(mean), static_cast<double>(k)));
}

double binomial_pmf(count_t k, count_t trials, double p) {
  if (k > trials) return 0.0;
  if (trials == 0) return 1.0;
  return boost::math::pdf(
      boost::math::binomial_distribution<double>(static_cast<double>(trials), p),
      static_cast<double>(k));
}

double binomial_upper_tail(count_t k, count_t trials, double p) {
  if (k >= trials) return 0.0;
  return boost::math::cdf(boost::math::complement(
      boost::math::binomial_distribution<double>(static_cast<double>(trials), p),
      static_cast<double>(k)));
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace riglab
