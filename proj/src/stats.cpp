#include "riglab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riglab {

namespace {

count_t pairs(count_t d) { return d < 2 ? 0 : d * (d - 1) / 2; }

std::optional<double> standard_error(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  return std::sqrt(var / static_cast<double>(values.size()));
}

void finalize(ClusteringReport& r) {
  r.alpha_hat.reset();
  r.alpha_hat_hat.reset();
  if (r.vertices_with_two_stars > 0) {
    r.alpha_hat = r.ratio_sum / static_cast<double>(r.vertices_with_two_stars);
  }
  if (r.n2_total > 0) {
    r.alpha_hat_hat =
        static_cast<double>(r.n3_total) / static_cast<double>(r.n2_total);
  }
}

}  // namespace

std::vector<count_t> degree_counts(const Graph& g) {
  std::vector<count_t> counts(1, 0);
  for (Index v = 0; v < g.vertex_count(); ++v) {
    const std::size_t d = g.degree(v);
    if (d >= counts.size()) counts.resize(d + 1, 0);
    ++counts[d];
  }
  return counts;
}

DiscretePmf degree_histogram(const Graph& g) {
  if (g.vertex_count() == 0) {
    throw std::invalid_argument("degree_histogram: graph has no vertices");
  }
  const auto counts = degree_counts(g);
  return DiscretePmf::from_counts(counts);
}

std::vector<LocalCounts> local_counts(const Graph& g) {
  std::vector<LocalCounts> out(g.vertex_count());
  for (Index v = 0; v < g.vertex_count(); ++v) {
    const auto adj = g.neighbors(v);
    out[v].degree = adj.size();
    out[v].n2 = pairs(adj.size());
  }
  // Each edge {u,v} closes |N(u) ∩ N(v)| triangles; credit every third vertex.
  for (Index u = 0; u < g.vertex_count(); ++u) {
    const auto nu = g.neighbors(u);
    for (Index v : nu) {
      if (v <= u) continue;
      const auto nv = g.neighbors(v);
      auto i = nu.begin();
      auto j = nv.begin();
      while (i != nu.end() && j != nv.end()) {
        if (*i < *j) {
          ++i;
        } else if (*j < *i) {
          ++j;
        } else {
          if (*i > v) {  // triangle u < v < w counted once
            ++out[u].n3;
            ++out[v].n3;
            ++out[*i].n3;
          }
          ++i;
          ++j;
        }
      }
    }
  }
  return out;
}

double DegreeBucket::value(count_t k) const {
  const double den = static_cast<double>(pairs(k)) * static_cast<double>(vertices);
  return den > 0.0 ? static_cast<double>(n3_sum) / den : 0.0;
}

std::map<count_t, double> ClusteringReport::per_degree() const {
  std::map<count_t, double> out;
  for (const auto& [k, bucket] : buckets) {
    if (bucket.vertices >= min_bucket) out[k] = bucket.value(k);
  }
  return out;
}

ClusteringReport clustering_report(const Graph& g, count_t min_bucket) {
  if (min_bucket < 1) throw std::invalid_argument("min_bucket must be >= 1");
  ClusteringReport r;
  r.min_bucket = min_bucket;
  r.vertex_count = g.vertex_count();
  for (const auto& c : local_counts(g)) {
    if (c.n2 == 0) continue;
    ++r.vertices_with_two_stars;
    r.ratio_sum += static_cast<double>(c.n3) / static_cast<double>(c.n2);
    r.n3_total += c.n3;
    r.n2_total += c.n2;
    auto& bucket = r.buckets[c.degree];
    ++bucket.vertices;
    bucket.n3_sum += c.n3;
  }
  finalize(r);
  return r;
}

ClusteringReport pooled_estimates(std::span<const ClusteringReport> reports) {
  if (reports.empty()) throw std::invalid_argument("pooled_estimates: no reports");
  ClusteringReport pooled;
  pooled.min_bucket = reports.front().min_bucket;
  pooled.replicates = 0;
  std::vector<double> alpha_values, global_values;
  std::map<count_t, std::vector<double>> bucket_values;
  for (const auto& r : reports) {
    pooled.replicates += r.replicates;
    pooled.vertex_count += r.vertex_count;
    pooled.vertices_with_two_stars += r.vertices_with_two_stars;
    pooled.ratio_sum += r.ratio_sum;
    pooled.n3_total += r.n3_total;
    pooled.n2_total += r.n2_total;
    if (r.alpha_hat) alpha_values.push_back(*r.alpha_hat);
    if (r.alpha_hat_hat) global_values.push_back(*r.alpha_hat_hat);
    for (const auto& [k, bucket] : r.buckets) {
      auto& target = pooled.buckets[k];
      target.vertices += bucket.vertices;
      target.n3_sum += bucket.n3_sum;
      if (bucket.vertices > 0) bucket_values[k].push_back(bucket.value(k));
    }
  }
  finalize(pooled);
  pooled.alpha_hat_se = standard_error(alpha_values);
  pooled.alpha_hat_hat_se = standard_error(global_values);
  for (auto& [k, bucket] : pooled.buckets) {
    bucket.se = standard_error(bucket_values[k]);
  }
  return pooled;
}

double tv_distance(const DiscretePmf& p, const DiscretePmf& q) {
  const std::size_t top = std::max(p.k_max(), q.k_max());
  CompensatedSum sum;
  for (std::size_t k = 0; k <= top; ++k) sum += std::abs(p[k] - q[k]);
  sum += std::abs(p.tail_mass() - q.tail_mass());
  return std::min(1.0, 0.5 * sum.value());
}

LogLogFit loglog_slope(const std::map<double, double>& points) {
  std::vector<double> xs, ys;
  for (const auto& [k, v] : points) {
    if (k > 0.0 && v > 0.0) {
      xs.push_back(std::log(k));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("loglog_slope: fewer than 3 positive points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    ss_res += e * e;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r2};
}

}  // namespace riglab
