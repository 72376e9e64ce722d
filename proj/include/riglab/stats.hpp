#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "riglab/graph.hpp"
#include "riglab/model.hpp"

namespace riglab {

/// Per-vertex triangle and 2-star counts.
struct LocalCounts {
  count_t degree;
  count_t n2;  // unlabeled 2-stars centred here, C(degree, 2)
  count_t n3;  // triangles through the vertex (edges among its neighbors)
};

std::vector<count_t> degree_counts(const Graph& g);
DiscretePmf degree_histogram(const Graph& g);
std::vector<LocalCounts> local_counts(const Graph& g);

inline constexpr count_t kDefaultMinBucket = 30;

struct DegreeBucket {
  count_t vertices = 0;
  count_t n3_sum = 0;
  std::optional<double> se;

  /// sum N3 / (C(k,2) * vertices)
  double value(count_t k) const;
};

/// Empirical clustering of one graph or of pooled replicates. Raw sums are
/// kept for every degree so that replicates can be pooled before the
/// min_bucket filter applies.
struct ClusteringReport {
  count_t vertex_count = 0;
  count_t replicates = 1;
  count_t min_bucket = kDefaultMinBucket;

  // Mean of N3/N2 over vertices with N2 > 0; vertices of degree < 2 are left
  // out of the average.
  count_t vertices_with_two_stars = 0;
  double ratio_sum = 0.0;
  std::optional<double> alpha_hat;
  std::optional<double> alpha_hat_se;

  count_t n3_total = 0;
  count_t n2_total = 0;
  std::optional<double> alpha_hat_hat;
  std::optional<double> alpha_hat_hat_se;

  std::map<count_t, DegreeBucket> buckets;  // every degree >= 2 seen

  /// Degrees whose bucket holds at least min_bucket vertices.
  std::map<count_t, double> per_degree() const;
};

ClusteringReport clustering_report(const Graph& g,
                                   count_t min_bucket = kDefaultMinBucket);

/// Count-weighted pooling; standard errors are the sample standard deviation
/// of per-replicate values over sqrt(R), absent for a single replicate.
ClusteringReport pooled_estimates(std::span<const ClusteringReport> reports);

/// 1/2 sum |p_k - q_k| + 1/2 |tail_p - tail_q|.
double tv_distance(const DiscretePmf& p, const DiscretePmf& q);

struct LogLogFit {
  double slope;
  double intercept;
  double r2;
};

/// Least squares of log(value) on log(k); nonpositive values are skipped.
/// Throws std::invalid_argument with fewer than 3 usable points.
LogLogFit loglog_slope(const std::map<double, double>& points);

}  // namespace riglab
