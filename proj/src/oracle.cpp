#include "riglab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixture.hpp"
#include "riglab/errors.hpp"

namespace riglab {

namespace {

constexpr double kExactDouble = 9007199254740992.0;  // 2^53
constexpr double kLinkTailTarget = 1e-12;

struct Support {
  count_t lo;
  count_t hi;
};

Support intersection_support(count_t m, count_t d1, count_t d2) {
  if (d1 > m || d2 > m) {
    throw std::invalid_argument("intersection: set sizes must not exceed m");
  }
  return {d1 + d2 > m ? d1 + d2 - m : 0, std::min(d1, d2)};
}

// Hypergeometric terms P(r) for r in [lo, hi]. Exact integer ratios when every
// binomial fits below 2^53; otherwise the mode is evaluated in log space, the
// rest follows from the term ratio
// P(r+1)/P(r) = (d1-r)(d2-r) / ((r+1)(m-d1-d2+r+1)),
// and the terms are renormalized over the support.
std::vector<double> hypergeometric_terms(count_t m, count_t d1, count_t d2,
                                         Support sup) {
  std::vector<double> terms(sup.hi - sup.lo + 1, 0.0);
  const auto total = choose_exact(m, d2);
  if (total && static_cast<double>(*total) < kExactDouble) {
    const double den = static_cast<double>(*total);
    for (count_t r = sup.lo; r <= sup.hi; ++r) {
      const count_t num = *choose_exact(d1, r) * *choose_exact(m - d1, d2 - r);
      terms[r - sup.lo] = static_cast<double>(num) / den;
    }
    return terms;
  }
  const double md = static_cast<double>(m);
  const double a = static_cast<double>(d1);
  const double b = static_cast<double>(d2);
  auto mode = static_cast<count_t>(std::floor((a + 1.0) * (b + 1.0) / (md + 2.0)));
  mode = std::clamp(mode, sup.lo, sup.hi);
  const double log_den = log_choose(m, d2);
  terms[mode - sup.lo] =
      std::exp(log_choose(d1, mode) + log_choose(m - d1, d2 - mode) - log_den);
  for (count_t r = mode; r < sup.hi; ++r) {
    const double rr = static_cast<double>(r);
    terms[r + 1 - sup.lo] = terms[r - sup.lo] * (a - rr) * (b - rr) /
                            ((rr + 1.0) * (md - a - b + rr + 1.0));
  }
  for (count_t r = mode; r > sup.lo; --r) {
    const double rr = static_cast<double>(r - 1);
    terms[r - 1 - sup.lo] = terms[r - sup.lo] * (rr + 1.0) *
                            (md - a - b + rr + 1.0) / ((a - rr) * (b - rr));
  }
  CompensatedSum total_mass;
  for (double t : terms) total_mass += t;
  for (double& t : terms) t /= total_mass.value();
  return terms;
}

// Truncated convolution; exact on [0, k_max] for nonnegative supports.
std::vector<double> convolve(const std::vector<double>& p,
                             const std::vector<double>& q, std::size_t k_max) {
  std::vector<double> out(std::min(k_max + 1, p.size() + q.size() - 1), 0.0);
  for (std::size_t i = 0; i < p.size() && i < out.size(); ++i) {
    if (p[i] == 0.0) continue;
    for (std::size_t j = 0; j < q.size() && i + j < out.size(); ++j) {
      out[i + j] += p[i] * q[j];
    }
  }
  return out;
}

std::vector<double> convolution_power(const std::vector<double>& base,
                                      count_t power, std::size_t k_max) {
  std::vector<double> result{1.0};
  std::vector<double> square = base;
  if (square.size() > k_max + 1) square.resize(k_max + 1);
  while (power > 0) {
    if (power & 1) result = convolve(result, square, k_max);
    power >>= 1;
    if (power > 0) square = convolve(square, square, k_max);
  }
  return result;
}

}  // namespace

DiscretePmf intersection_pmf(count_t m, count_t d1, count_t d2) {
  const auto sup = intersection_support(m, d1, d2);
  const auto terms = hypergeometric_terms(m, d1, d2, sup);
  std::vector<double> probs(sup.hi + 1, 0.0);
  std::copy(terms.begin(), terms.end(), probs.begin() + sup.lo);
  return DiscretePmf::with_residual_tail(std::move(probs));
}

double intersection_tail(count_t m, count_t d1, count_t d2, count_t s) {
  const auto sup = intersection_support(m, d1, d2);
  if (s > sup.hi) return 0.0;
  const auto total = choose_exact(m, d2);
  if (total && static_cast<double>(*total) < kExactDouble) {
    unsigned __int128 num = 0;
    for (count_t r = std::max(s, sup.lo); r <= sup.hi; ++r) {
      num += static_cast<unsigned __int128>(*choose_exact(d1, r)) *
             *choose_exact(m - d1, d2 - r);
    }
    return static_cast<double>(static_cast<count_t>(num)) /
           static_cast<double>(*total);
  }
  const auto terms = hypergeometric_terms(m, d1, d2, sup);
  CompensatedSum tail;
  for (count_t r = std::max(s, sup.lo); r <= sup.hi; ++r) {
    tail += terms[r - sup.lo];
  }
  return std::min(tail.value(), 1.0);
}

BoundsPair sx1_bounds(count_t m, count_t d1, count_t d2, count_t s) {
  if (d1 > d2) std::swap(d1, d2);
  if (d2 > m) throw std::invalid_argument("sx1_bounds: sizes exceed m");
  if (s < 1 || s > d1) return {0.0, 0.0};
  double p_star;
  const auto c1 = choose_exact(d1, s);
  const auto c2 = choose_exact(d2, s);
  const auto cm = choose_exact(m, s);
  const unsigned __int128 num =
      (c1 && c2) ? static_cast<unsigned __int128>(*c1) * *c2 : 0;
  if (c1 && c2 && cm && num < static_cast<unsigned __int128>(kExactDouble) &&
      static_cast<double>(*cm) < kExactDouble) {
    p_star = static_cast<double>(static_cast<count_t>(num)) /
             static_cast<double>(*cm);
  } else {
    p_star = std::exp(log_choose(d1, s) + log_choose(d2, s) - log_choose(m, s));
  }
  const double shrink =
      static_cast<double>(d1 - s) * static_cast<double>(d2 - s) /
      static_cast<double>(m + 1 - d1);
  return {std::max(0.0, (1.0 - shrink) * p_star), std::min(p_star, 1.0)};
}

DiscretePmf exact_active_degree_pmf(const SizeDistribution& p, count_t n,
                                    count_t m, count_t s,
                                    std::optional<std::size_t> k_max) {
  ModelParams{n, m, s, p, GraphKind::active}.validate();
  const auto atoms = p.atoms();
  std::vector<double> weights, edge_prob;
  for (const auto& a1 : atoms) {
    CompensatedSum q;
    for (const auto& a : atoms) {
      q += a.weight * intersection_tail(m, a1.size, a.size, s);
    }
    weights.push_back(a1.weight);
    edge_prob.push_back(std::min(q.value(), 1.0));
  }
  const count_t trials = n - 1;
  if (k_max) k_max = std::min<std::size_t>(*k_max, trials);
  return detail::truncated_mixture(
      weights, k_max, trials,
      [&](std::size_t c, std::size_t k) {
        return binomial_pmf(k, trials, edge_prob[c]);
      },
      [&](std::size_t c, std::size_t k) {
        return binomial_upper_tail(k, trials, edge_prob[c]);
      });
}

DiscretePmf exact_passive_links_pmf(const SizeDistribution& p, count_t n,
                                    count_t m,
                                    std::optional<std::size_t> k_max) {
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
  if (p.support_max() != m) {
    throw std::invalid_argument("size distribution support_max must equal m");
  }
  // Contribution of one set: (x-1)_+ links when it covers the attribute.
  std::vector<double> single(p.largest_size() > 0 ? p.largest_size() : 1, 0.0);
  CompensatedSum covered;
  double mean = 0.0, second = 0.0;
  for (const auto& a : p.atoms()) {
    if (a.size == 0) continue;
    const double w = a.weight * static_cast<double>(a.size) /
                     static_cast<double>(m);
    single[a.size - 1] += w;
    covered += w;
    const double v = static_cast<double>(a.size - 1);
    mean += w * v;
    second += w * v * v;
  }
  single[0] += 1.0 - covered.value();

  const double nn = static_cast<double>(n);
  const double total_mean = nn * mean;
  const double total_sd = std::sqrt(std::max(0.0, nn * (second - mean * mean)));
  std::size_t limit = k_max ? *k_max
                            : static_cast<std::size_t>(
                                  total_mean + 12.0 * total_sd +
                                  static_cast<double>(single.size()) + 10.0);
  const std::size_t ceiling = static_cast<std::size_t>(
      std::min(nn * static_cast<double>(single.size() - 1), 1e8));
  limit = std::min(limit, ceiling);
  for (;;) {
    auto probs = convolution_power(single, n, limit);
    auto pmf = DiscretePmf::with_residual_tail(std::move(probs));
    if (k_max || pmf.tail_mass() < kLinkTailTarget || limit >= ceiling) {
      return pmf;
    }
    limit = std::min(2 * limit, ceiling);
  }
}

double lecam_bound(std::span<const double> probs) {
  CompensatedSum sum;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("lecam_bound: probabilities must lie in [0,1]");
    }
    sum += p * p;
  }
  return 2.0 * sum.value();
}

DiscretePmf brute_force_degree_pmf(const ModelParams& params, double budget) {
  params.validate();
  if (params.m > 20) {
    throw ResourceLimitError("brute force: m above 20 cannot be enumerated");
  }
  const auto m = static_cast<unsigned>(params.m);
  std::vector<std::uint32_t> subsets;
  std::vector<double> subset_weight;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const count_t size = std::popcount(mask);
    const double w = params.size_dist.weight(size);
    if (w > 0.0) {
      subsets.push_back(mask);
      subset_weight.push_back(w / choose(m, size));
    }
  }
  const double configurations =
      std::pow(static_cast<double>(subsets.size()), static_cast<double>(params.n));
  if (configurations > budget) {
    throw ResourceLimitError("brute force: " + std::to_string(configurations) +
                             " configurations exceed the enumeration budget");
  }
  const bool active = params.kind == GraphKind::active;
  const std::size_t n = params.n;
  std::vector<CompensatedSum> mass(active ? n : m);
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) w *= subset_weight[choice[i]];
    std::size_t degree = 0;
    if (active) {
      const auto d1 = subsets[choice[0]];
      for (std::size_t j = 1; j < n; ++j) {
        if (static_cast<count_t>(std::popcount(d1 & subsets[choice[j]])) >= params.s) {
          ++degree;
        }
      }
    } else {
      for (unsigned other = 1; other < m; ++other) {
        const std::uint32_t pair = 1u | (1u << other);
        count_t cover = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if ((subsets[choice[j]] & pair) == pair) ++cover;
        }
        if (cover >= params.s) ++degree;
      }
    }
    mass[degree] += w;

    std::size_t pos = 0;
    while (pos < n && ++choice[pos] == subsets.size()) choice[pos++] = 0;
    if (pos == n) break;
  }
  std::vector<double> probs;
  for (const auto& c : mass) probs.push_back(c.value());
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
  return DiscretePmf::with_residual_tail(std::move(probs));
}

Example2Diagnostics example2_diagnostics(count_t m, double epsilon) {
  if (m % 2 != 0) throw std::invalid_argument("example2: m must be even");
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::invalid_argument("example2: epsilon must lie in (0, 0.5]");
  }
  const double x_real = (epsilon + 0.5) * static_cast<double>(m);
  const double x_round = std::round(x_real);
  if (std::abs(x_real - x_round) > 1e-9) {
    throw std::invalid_argument("example2: (epsilon + 0.5) m is not an integer");
  }
  Example2Diagnostics d{};
  d.s = m / 2;
  d.x = static_cast<count_t>(x_round);
  if (d.x > m || d.x <= d.s) {
    throw std::invalid_argument("example2: need s < x <= m");
  }
  d.p_star = std::exp(2.0 * log_choose(d.x, d.s) - log_choose(m, d.s));
  const auto law = intersection_pmf(m, d.x, d.x);
  d.p_prime = law[d.s];
  d.p_double_prime = intersection_tail(m, d.x, d.x, d.s);
  d.ratio_prime = 1.0;
  for (count_t i = 0; i < d.x - d.s; ++i) {
    d.ratio_prime *= static_cast<double>(m - d.x - i) /
                     static_cast<double>(m - d.s - i);
  }
  d.bound = std::pow(1.0 - 2.0 * epsilon, epsilon * static_cast<double>(m));
  if (epsilon < 0.1) {
    d.double_prime_within_ten_percent =
        d.p_prime <= d.p_double_prime && d.p_double_prime <= 1.1 * d.p_prime;
  }
  return d;
}

}  // namespace riglab
