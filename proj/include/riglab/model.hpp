#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "riglab/combinatorics.hpp"

namespace riglab {

/// Finitely truncated pmf on {0, 1, ...}. Mass that a truncation cut off is
/// kept in tail_mass, so probs plus tail always account for the full law.
class DiscretePmf {
 public:
  /// Point mass at 0.
  DiscretePmf();
  /// Throws std::invalid_argument unless probs are nonnegative and
  /// sum(probs) + tail_mass = 1 within 1e-10.
  explicit DiscretePmf(std::vector<double> probs, double tail_mass = 0.0);

  static DiscretePmf point_mass(std::size_t k);
  /// Empirical pmf of a histogram; tail_mass = 0.
  static DiscretePmf from_counts(std::span<const count_t> counts);
  /// Sets tail_mass = max(0, 1 - sum(probs)); for truncated exact computations.
  static DiscretePmf with_residual_tail(std::vector<double> probs);

  std::size_t k_max() const { return probs_.size() - 1; }
  std::span<const double> probs() const { return probs_; }
  double tail_mass() const { return tail_mass_; }
  double operator[](std::size_t k) const {
    return k < probs_.size() ? probs_[k] : 0.0;
  }

  double mean() const;
  /// E[(X)_order] over the retained support.
  double factorial_moment(unsigned order) const;
  double raw_moment(unsigned order) const;

 private:
  std::vector<double> probs_;
  double tail_mass_ = 0.0;
};

/// Law of a set size |D_i| on {0..m}; stored sparsely as (size, weight)
/// atoms so that m can be as large as 1e9.
class SizeDistribution {
 public:
  struct Atom {
    count_t size;
    double weight;
  };

  /// Dense weights indexed 0..m (m = weights.size() - 1).
  explicit SizeDistribution(std::vector<double> weights);
  /// Sparse atoms; zero weights are dropped, the rest must sum to 1.
  SizeDistribution(count_t support_max, std::vector<Atom> atoms);

  count_t support_max() const { return support_max_; }
  std::span<const Atom> atoms() const { return atoms_; }
  double weight(count_t x) const;
  double mass_at_least(count_t x) const;
  double mean() const;
  count_t largest_size() const { return atoms_.back().size; }
  bool is_degenerate() const { return atoms_.size() == 1; }

  DiscretePmf to_pmf() const;

 private:
  count_t support_max_;
  std::vector<Atom> atoms_;
};

namespace size_spec {
struct Degenerate {
  count_t x;
};
struct Table {
  std::vector<double> weights;
};
struct TruncatedPowerLaw {
  double gamma;
  count_t x_min;
  count_t x_max;
};
struct Binomial {
  count_t trials;
  double p;
};
}  // namespace size_spec

using SizeSpec = std::variant<size_spec::Degenerate, size_spec::Table,
                              size_spec::TruncatedPowerLaw, size_spec::Binomial>;

// Throws std::invalid_argument for support beyond m or bad parameters.
SizeDistribution make_size_dist(const SizeSpec& spec, count_t m);

enum class GraphKind { active, passive };

std::string to_string(GraphKind kind);
GraphKind parse_graph_kind(const std::string& text);

struct ModelParams {
  count_t n;
  count_t m;
  count_t s;
  SizeDistribution size_dist;
  GraphKind kind = GraphKind::active;

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

struct Moments {
  double a1;  // E C(X,s)
  double a2;  // E C(X,s)^2
  double f1;  // E X
  double f2;  // E (X)_2
  double f3;  // E (X)_3
};

Moments moments(const SizeDistribution& p, count_t s);

/// Scale constants of a model. z(x) = C(x,s) sqrt(n / C(m,s)) is the rescaled
/// number of joints of a vertex holding x attributes.
struct DerivedParams {
  count_t n;
  count_t m;
  count_t s;
  double mu1;          // E z(X)
  double z_second;     // E z(X)^2
  double beta_active;  // C(m,s)/n
  double log_beta_active;
  double beta_passive;  // m/n
  double beta_star;     // n/m
  double n_star;        // n P(X >= 2)

  double z(count_t x) const;
};

DerivedParams derive_params(const ModelParams& params);

/// q~_j = (j+1) q_{j+1} / mu_Q, or a point mass at 0 when mu_Q = 0.
DiscretePmf size_biased(const DiscretePmf& q);

/// Law of X given X >= 2. Throws std::domain_error without mass there.
SizeDistribution conditional_ge2(const SizeDistribution& p);

}  // namespace riglab
