#pragma once

#include <optional>
#include <span>
#include <string>

#include "riglab/model.hpp"

// Closed-form asymptotic laws of sparse random intersection graphs, evaluated
// at finite (n, m) by plugging in the finite-scale constants. None of these
// carry the vanishing correction terms; callers label them as predictions.

namespace riglab {

struct EdgeProbability {
  double value;  // clamped to [0, 1]
  double raw;    // a1^2 / C(m,s) before clamping
  bool clamped;
};

/// a1^2 / C(m,s). The formula is asymptotic and can exceed 1 in dense
/// regimes; the result is then clamped and flagged.
EdgeProbability active_edge_prob_asymptotic(const SizeDistribution& p,
                                            count_t m, count_t s);

/// p_k = sum_x P(x) Poisson_k(z(x) mu1). Without k_max the pmf is extended
/// until the remaining mass is below 1e-10.
DiscretePmf mixed_poisson_degree_pmf(const SizeDistribution& p, count_t n,
                                     count_t m, count_t s,
                                     std::optional<std::size_t> k_max = {});

struct DegreeMoments {
  double ed;   // E d*
  double ed2;  // E d*^2
};

DegreeMoments degree_moments_from_z(const SizeDistribution& p, count_t n,
                                    count_t m, count_t s);

/// a1 / a2. Throws std::domain_error when a2 = 0.
double alpha_active(const SizeDistribution& p, count_t m, count_t s);

/// EZ / (sqrt(beta) EZ^2) with beta = C(m,s)/n.
double alpha_active_beta_form(const SizeDistribution& p, count_t n, count_t m,
                              count_t s);

/// Ed^{3/2} / (sqrt(beta) (Ed2 - Ed)). Requires Ed2 > Ed > 0.
double alpha_active_from_degree_moments(double beta, double ed, double ed2);

/// (1/k) (EZ / sqrt(beta)) p_{k-1} / p_k for k >= 2.
double alpha_k_active(const SizeDistribution& p, count_t n, count_t m,
                      count_t s, count_t k);

/// Compound Poisson sum of Poisson(lambda) i.i.d. jumps.
struct CompoundPoissonSpec {
  double lambda;
  DiscretePmf jump_pmf;
};

/// lambda = (n/m) E X, jumps distributed as the size-biased law of X shifted
/// down by one (the covered vertex itself).
CompoundPoissonSpec passive_compound_spec(const SizeDistribution& p,
                                          count_t n, count_t m);

/// Panjer recursion: g_0 = exp(-lambda (1 - f_0)),
/// g_k = (lambda / k) sum_{j=1..k} j f_j g_{k-j}.
DiscretePmf compound_poisson_pmf(const CompoundPoissonSpec& spec,
                                 std::optional<std::size_t> k_max = {});

/// Finite-size passive clustering,
/// (b*^2 f2^3 / m + f3) / (b* f2^2 + f3) with b* = n/m.
double alpha_passive_finite(const SizeDistribution& p, count_t n, count_t m);

/// (E(d*)_2 - (E d*)^2) / E(d*)_2 from the compound Poisson moments.
double alpha_passive_limit(const CompoundPoissonSpec& spec);

/// E(d2* | d* = k) / (k (k-1)), where each jump j adds (j)_2 to d2*.
/// Throws std::domain_error when P(d* = k) = 0.
double alpha_k_passive(const CompoundPoissonSpec& spec, count_t k);

/// Diagnostics for vertex 1 of a realized size sequence.
struct Theorem1Stats {
  double lambda_bar;
  double kappa1;
  double kappa2;  // +inf when x_1 = m with x_1 > s
  bool kappa2_infinite;
};

Theorem1Stats theorem1_statistics(std::span<const count_t> sizes, count_t m,
                                  count_t s);

enum class RegimeCase { m_dominates, n_star_small, n_star_dominates, balanced };

std::string to_string(RegimeCase c);

struct RegimeReport {
  RegimeCase case_label;
  double n_star;
  std::string advice;
  // Set for the balanced case: parameters (floor(n_star), P(.|X>=2)) that
  // share the asymptotic degree law.
  std::optional<count_t> effective_n;
  std::optional<SizeDistribution> effective_size_dist;
};

RegimeReport passive_regime_classify(count_t n, count_t m,
                                     const SizeDistribution& p);

}  // namespace riglab
