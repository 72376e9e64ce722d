#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riglab/errors.hpp"
#include "riglab/graph.hpp"
#include "riglab/model.hpp"
#include "riglab/rng.hpp"

namespace riglab {

/// Realized attribute sets D_1..D_n over {0..m-1}, stored contiguously.
class Incidence {
 public:
  Incidence(count_t m, std::vector<std::size_t> offsets,
            std::vector<Index> members);
  /// Convenience for tests and small inputs; each set must be strictly
  /// increasing.
  Incidence(count_t m, const std::vector<std::vector<Index>>& sets);

  count_t m() const { return m_; }
  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const Index> set(std::size_t i) const {
    return {members_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::vector<count_t> set_sizes() const;

  bool operator==(const Incidence&) const = default;

 private:
  count_t m_;
  std::vector<std::size_t> offsets_;
  std::vector<Index> members_;
};

inline constexpr double kDefaultPairCap = 2e8;

/// Uniform x-subset of {0..m-1}, sorted. Floyd's algorithm for sparse draws,
/// sequential selection when x is a sizeable fraction of m; neither rejects.
std::vector<Index> sample_subset(count_t m, count_t x, RngStream& rng);

Incidence sample_incidence(const ModelParams& params, RngStream& rng);

/// Projected number of co-occurring actor pairs, sum_w C(deg_W(w), 2).
double active_pair_budget(const Incidence& inc);
/// Projected number of co-covered attribute pairs, sum_j C(|D_j|, 2).
double passive_pair_budget(const Incidence& inc);

/// Vertices 0..n-1; {i,j} is an edge iff |D_i ∩ D_j| >= s.
Graph build_active(const Incidence& inc, count_t s,
                   double pair_cap = kDefaultPairCap);

/// Vertices 0..m-1; {w,w'} is an edge iff at least s sets contain both.
Graph build_passive(const Incidence& inc, count_t s,
                    double pair_cap = kDefaultPairCap);

}  // namespace riglab
