#pragma once

#include <optional>
#include <span>

#include "riglab/model.hpp"

// Exact finite-n ground truth: hypergeometric intersection laws, degree laws
// without asymptotics, and exhaustive enumeration for tiny instances.

namespace riglab {

struct BoundsPair {
  double lower;
  double upper;
};

/// Law of |D1 ∩ D2| for independent uniform d1- and d2-subsets of an m-set.
DiscretePmf intersection_pmf(count_t m, count_t d1, count_t d2);

/// P(|D1 ∩ D2| >= s).
double intersection_tail(count_t m, count_t d1, count_t d2, count_t s);

/// Sandwich for the tail: upper p* = C(d1,s) C(d2,s) / C(m,s) (capped at 1),
/// lower (1 - (d1-s)(d2-s)/(m+1-d1)) p* (floored at 0), with d1 <= d2.
/// Returns (0, 0) when s > min(d1, d2).
BoundsPair sx1_bounds(count_t m, count_t d1, count_t d2, count_t s);

/// Exact degree law of one actor: a mixture over |D_1| = x1 of
/// Binomial(n-1, qbar(x1)), qbar(x1) = sum_x P(x) P(|D1 ∩ D2| >= s).
DiscretePmf exact_active_degree_pmf(const SizeDistribution& p, count_t n,
                                    count_t m, count_t s,
                                    std::optional<std::size_t> k_max = {});

/// Exact law of the link count L at a fixed attribute: the n-fold convolution
/// of the single-set contribution (x-1)_+ (taken with probability P(x) x/m).
/// Without k_max the support is extended until the tail is below 1e-12.
DiscretePmf exact_passive_links_pmf(const SizeDistribution& p, count_t n,
                                    count_t m,
                                    std::optional<std::size_t> k_max = {});

/// 2 sum p_i^2, bounding d_TV(sum of Bernoulli(p_i), Poisson(sum p_i)).
double lecam_bound(std::span<const double> probs);

inline constexpr double kBruteForceBudget = 1e7;

/// Degree law of vertex 0 (active) or attribute 0 (passive, simple-graph
/// degree) by weighted enumeration of every configuration of sets. Throws
/// ResourceLimitError when the number of configurations exceeds the budget.
DiscretePmf brute_force_degree_pmf(const ModelParams& params,
                                   double budget = kBruteForceBudget);

struct Example2Diagnostics {
  count_t s;
  count_t x;
  double p_star;         // C(x,s)^2 / C(m,s)
  double p_prime;        // P(|D1 ∩ D2| = s)
  double p_double_prime; // P(|D1 ∩ D2| >= s)
  double ratio_prime;    // p' / p* = (m-x)_{x-s} / (m-s)_{x-s}
  double bound;          // (1 - 2 eps)^{eps m}
  // p'' within [p', 1.1 p']; only meaningful (and set) for eps < 0.1.
  std::optional<bool> double_prime_within_ten_percent;
};

/// s = m/2, x = (eps + 1/2) m. Throws std::invalid_argument unless both are
/// integers with s < x <= m.
Example2Diagnostics example2_diagnostics(count_t m, double epsilon);

}  // namespace riglab
