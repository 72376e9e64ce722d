#include "riglab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mixture.hpp"

namespace riglab {

namespace {

constexpr std::size_t kHardDegreeMax = 10'000'000;
constexpr double kPoissonCountTail = 1e-12;
// Thresholds separating the asymptotic passive regimes at finite scale.
constexpr double kRegimeRatio = 0.01;

ModelParams active_params(const SizeDistribution& p, count_t n, count_t m,
                          count_t s) {
  return ModelParams{n, m, s, p, GraphKind::active};
}

std::vector<double> atom_weights(const SizeDistribution& p) {
  std::vector<double> w;
  for (const auto& a : p.atoms()) w.push_back(a.weight);
  return w;
}

}  // namespace

EdgeProbability active_edge_prob_asymptotic(const SizeDistribution& p,
                                            count_t m, count_t s) {
  const double a1 = moments(p, s).a1;
  if (a1 <= 0.0) return {0.0, 0.0, false};
  const double raw = std::exp(2.0 * std::log(a1) - log_choose(m, s));
  return {std::min(raw, 1.0), raw, raw > 1.0};
}

DiscretePmf mixed_poisson_degree_pmf(const SizeDistribution& p, count_t n,
                                     count_t m, count_t s,
                                     std::optional<std::size_t> k_max) {
  const auto derived = derive_params(active_params(p, n, m, s));
  std::vector<double> intensity;
  for (const auto& a : p.atoms()) {
    intensity.push_back(derived.z(a.size) * derived.mu1);
  }
  const auto weights = atom_weights(p);
  return detail::truncated_mixture(
      weights, k_max, kHardDegreeMax,
      [&](std::size_t c, std::size_t k) { return poisson_pmf(k, intensity[c]); },
      [&](std::size_t c, std::size_t k) {
        return poisson_upper_tail(k, intensity[c]);
      });
}

DegreeMoments degree_moments_from_z(const SizeDistribution& p, count_t n,
                                    count_t m, count_t s) {
  const auto d = derive_params(active_params(p, n, m, s));
  const double mu2 = d.mu1 * d.mu1;
  return {mu2, mu2 * d.z_second + mu2};
}

double alpha_active(const SizeDistribution& p, count_t m, count_t s) {
  if (s < 1 || s > m) throw std::invalid_argument("s must lie in [1, m]");
  const auto mom = moments(p, s);
  if (!(mom.a2 > 0.0)) {
    throw std::domain_error(
        "clustering undefined: no vertex can hold a joint");
  }
  return mom.a1 / mom.a2;
}

double alpha_active_beta_form(const SizeDistribution& p, count_t n, count_t m,
                              count_t s) {
  const auto d = derive_params(active_params(p, n, m, s));
  if (!(d.z_second > 0.0)) {
    throw std::domain_error("clustering undefined: E Z^2 = 0");
  }
  return d.mu1 / (std::exp(0.5 * d.log_beta_active) * d.z_second);
}

double alpha_active_from_degree_moments(double beta, double ed, double ed2) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(ed > 0.0) || !(ed2 > ed)) {
    throw std::domain_error("degree moments need E d^2 > E d > 0");
  }
  return std::pow(ed, 1.5) / (std::sqrt(beta) * (ed2 - ed));
}

double alpha_k_active(const SizeDistribution& p, count_t n, count_t m,
                      count_t s, count_t k) {
  if (k < 2) throw std::invalid_argument("alpha_k needs k >= 2");
  const auto d = derive_params(active_params(p, n, m, s));
  CompensatedSum below, at;
  for (const auto& a : p.atoms()) {
    const double intensity = d.z(a.size) * d.mu1;
    below += a.weight * poisson_pmf(k - 1, intensity);
    at += a.weight * poisson_pmf(k, intensity);
  }
  if (!(at.value() > 0.0)) {
    throw std::domain_error("degree k has zero asymptotic mass");
  }
  return d.mu1 / std::exp(0.5 * d.log_beta_active) * below.value() /
         (static_cast<double>(k) * at.value());
}

CompoundPoissonSpec passive_compound_spec(const SizeDistribution& p,
                                          count_t n, count_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
  const double mean = p.mean();
  if (!(mean > 0.0)) return {0.0, DiscretePmf::point_mass(0)};
  return {static_cast<double>(n) / static_cast<double>(m) * mean,
          size_biased(p.to_pmf())};
}

DiscretePmf compound_poisson_pmf(const CompoundPoissonSpec& spec,
                                 std::optional<std::size_t> k_max) {
  if (!(spec.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const auto f = spec.jump_pmf.probs();
  const double exponent = spec.lambda * (1.0 - f[0]);
  if (exponent > 700.0) {
    throw std::domain_error("compound Poisson: lambda (1 - f0) too large");
  }
  std::vector<double> g{std::exp(-exponent)};
  CompensatedSum cumulative;
  cumulative += g[0];
  for (std::size_t k = 1;; ++k) {
    if (k_max) {
      if (k > *k_max) break;
    } else if (1.0 - cumulative.value() < detail::kDefaultTailTarget ||
               k > kHardDegreeMax) {
      break;
    }
    CompensatedSum acc;
    const std::size_t top = std::min(k, f.size() - 1);
    for (std::size_t j = 1; j <= top; ++j) {
      if (f[j] > 0.0) acc += static_cast<double>(j) * f[j] * g[k - j];
    }
    g.push_back(spec.lambda / static_cast<double>(k) * acc.value());
    cumulative += g.back();
  }
  return DiscretePmf::with_residual_tail(std::move(g));
}

double alpha_passive_finite(const SizeDistribution& p, count_t n, count_t m) {
  const auto mom = moments(p, 1);
  if (!(mom.f2 > 0.0)) {
    throw std::domain_error("passive clustering needs E (X)_2 > 0");
  }
  const double b = static_cast<double>(n) / static_cast<double>(m);
  const double f2 = mom.f2;
  return (b * b * f2 * f2 * f2 / static_cast<double>(m) + mom.f3) /
         (b * f2 * f2 + mom.f3);
}

double alpha_passive_limit(const CompoundPoissonSpec& spec) {
  const double ed = spec.lambda * spec.jump_pmf.mean();
  const double ed2 = spec.lambda * spec.jump_pmf.raw_moment(2) + ed * ed;
  const double fd2 = ed2 - ed;
  if (!(fd2 > 0.0)) {
    throw std::domain_error("passive clustering needs E (d*)_2 > 0");
  }
  return (fd2 - ed * ed) / fd2;
}

double alpha_k_passive(const CompoundPoissonSpec& spec, count_t k) {
  if (k < 2) throw std::invalid_argument("alpha_k needs k >= 2");
  const auto f = spec.jump_pmf.probs();
  const std::size_t top = std::min<std::size_t>(k, f.size() - 1);
  // After t jumps: mass[i] = P(S_t = i), pair_mass[i] = E[D2_t ; S_t = i].
  std::vector<double> mass(k + 1, 0.0), pair_mass(k + 1, 0.0);
  mass[0] = 1.0;
  CompensatedSum at_k, pairs_at_k;
  for (count_t t = 0;; ++t) {
    const double weight = poisson_pmf(t, spec.lambda);
    at_k += weight * mass[k];
    pairs_at_k += weight * pair_mass[k];
    if (poisson_upper_tail(t, spec.lambda) < kPoissonCountTail) break;
    if (f[0] == 0.0 && t >= k) break;  // every further jump adds at least 1
    std::vector<double> next_mass(k + 1, 0.0), next_pairs(k + 1, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      if (mass[i] == 0.0 && pair_mass[i] == 0.0) continue;
      for (std::size_t j = 0; j <= top && i + j <= k; ++j) {
        if (f[j] == 0.0) continue;
        const double pairs = static_cast<double>(j) * (static_cast<double>(j) - 1.0);
        next_mass[i + j] += f[j] * mass[i];
        next_pairs[i + j] += f[j] * (pair_mass[i] + pairs * mass[i]);
      }
    }
    mass.swap(next_mass);
    pair_mass.swap(next_pairs);
  }
  if (!(at_k.value() > 0.0)) {
    throw std::domain_error("degree k has zero asymptotic mass");
  }
  const double kk = static_cast<double>(k);
  return pairs_at_k.value() / (at_k.value() * kk * (kk - 1.0));
}

Theorem1Stats theorem1_statistics(std::span<const count_t> sizes, count_t m,
                                  count_t s) {
  if (sizes.size() < 2) {
    throw std::invalid_argument("theorem1_statistics needs n >= 2");
  }
  if (s < 1 || s > m) throw std::invalid_argument("s must lie in [1, m]");
  for (count_t x : sizes) {
    if (x > m) throw std::invalid_argument("set size exceeds m");
  }
  const count_t x1 = sizes[0];
  Theorem1Stats out{0.0, 0.0, 0.0, false};
  if (x1 < s) return out;
  const double log_m_s = log_choose(m, s);
  const double log_x1_s = log_choose(x1, s);
  CompensatedSum lambda, kappa1, weighted_excess;
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    if (sizes[k] < s) continue;
    const double r = std::exp(log_x1_s + log_choose(sizes[k], s) - log_m_s);
    lambda += r;
    kappa1 += r * r;
    weighted_excess += r * static_cast<double>(sizes[k] - s);
  }
  out.lambda_bar = lambda.value();
  out.kappa1 = kappa1.value();
  const count_t excess1 = x1 - s;
  if (excess1 == 0 || weighted_excess.value() == 0.0) {
    out.kappa2 = 0.0;
  } else if (x1 == m) {
    out.kappa2 = std::numeric_limits<double>::infinity();
    out.kappa2_infinite = true;
  } else {
    out.kappa2 = static_cast<double>(excess1) / static_cast<double>(m - x1) *
                 weighted_excess.value();
  }
  return out;
}

std::string to_string(RegimeCase c) {
  switch (c) {
    case RegimeCase::m_dominates:
      return "m_dominates";
    case RegimeCase::n_star_small:
      return "n_star_small";
    case RegimeCase::n_star_dominates:
      return "n_star_dominates";
    case RegimeCase::balanced:
      return "balanced";
  }
  return "unknown";
}

RegimeReport passive_regime_classify(count_t n, count_t m,
                                     const SizeDistribution& p) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double n_star = nn * p.mass_at_least(2);
  if (nn / mm < kRegimeRatio) {
    return {RegimeCase::m_dominates, n_star,
            "n = o(m): degrees are either 0 or of order m/n; no stochastically "
            "bounded nondegenerate limit",
            std::nullopt, std::nullopt};
  }
  if (n_star / mm < kRegimeRatio) {
    return {RegimeCase::n_star_small, n_star,
            "n_* = o(m): the few sets of size >= 2 produce degrees of order "
            "m/max(1,n_*); no nondegenerate limit",
            std::nullopt, std::nullopt};
  }
  if (mm / n_star < kRegimeRatio) {
    return {RegimeCase::n_star_dominates, n_star,
            "m = o(n_*): degrees diverge, P(d > C) -> 1 for every C",
            std::nullopt, std::nullopt};
  }
  return {RegimeCase::balanced, n_star,
          "m and n_* comparable: compound Poisson degree law applies with "
          "effective parameters (floor(n_*), P(X | X >= 2))",
          static_cast<count_t>(std::floor(n_star)), conditional_ge2(p)};
}

}  // namespace riglab
