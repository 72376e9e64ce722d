#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riglab/model.hpp"

namespace riglab::detail {

inline constexpr double kDefaultTailTarget = 1e-10;

// pmf of a finite mixture sum_c w_c Law_c, truncated either at a caller-given
// k_max or at the first k whose remaining mass drops below kDefaultTailTarget
// (never beyond hard_max). The tail is evaluated from the components' exact
// upper tails rather than by subtraction.
template <class PmfFn, class TailFn>
DiscretePmf truncated_mixture(std::span<const double> weights,
                              std::optional<std::size_t> k_max,
                              std::size_t hard_max, PmfFn pmf,
                              TailFn upper_tail) {
  std::vector<double> probs;
  CompensatedSum cumulative;
  for (std::size_t k = 0;; ++k) {
    CompensatedSum pk;
    for (std::size_t c = 0; c < weights.size(); ++c) {
      if (weights[c] > 0.0) pk += weights[c] * pmf(c, k);
    }
    probs.push_back(pk.value());
    cumulative += pk.value();
    if (k_max) {
      if (k >= *k_max) break;
    } else if (1.0 - cumulative.value() < kDefaultTailTarget || k >= hard_max) {
      break;
    }
  }
  const std::size_t last = probs.size() - 1;
  CompensatedSum tail;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (weights[c] > 0.0) tail += weights[c] * upper_tail(c, last);
  }
  return DiscretePmf(std::move(probs), std::max(0.0, tail.value()));
}

}  // namespace riglab::detail
