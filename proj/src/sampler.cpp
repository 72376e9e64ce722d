#include "riglab/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace riglab {

namespace {

// Compressed list-of-lists: row r owns items[offsets[r] .. offsets[r+1]).
struct Rows {
  std::vector<std::size_t> offsets;
  std::vector<Index> items;

  std::span<const Index> row(std::size_t r) const {
    return {items.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
  std::size_t size() const { return offsets.size() - 1; }
};

Rows rows_of(const Incidence& inc) {
  Rows rows;
  rows.offsets.reserve(inc.size() + 1);
  rows.offsets.push_back(0);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const auto set = inc.set(i);
    rows.items.insert(rows.items.end(), set.begin(), set.end());
    rows.offsets.push_back(rows.items.size());
  }
  return rows;
}

// Column view of an incidence: for every attribute, the increasing list of
// sets that contain it.
Rows transpose(const Incidence& inc) {
  Rows cols;
  cols.offsets.assign(inc.m() + 1, 0);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    for (Index w : inc.set(i)) ++cols.offsets[w + 1];
  }
  for (count_t w = 0; w < inc.m(); ++w) cols.offsets[w + 1] += cols.offsets[w];
  cols.items.resize(cols.offsets.back());
  std::vector<std::size_t> cursor(cols.offsets.begin(), cols.offsets.end() - 1);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    for (Index w : inc.set(i)) cols.items[cursor[w]++] = static_cast<Index>(i);
  }
  return cols;
}

double pair_budget(const Rows& groups) {
  double total = 0.0;
  for (std::size_t g = 0; g + 1 < groups.offsets.size(); ++g) {
    const double d = static_cast<double>(groups.offsets[g + 1] - groups.offsets[g]);
    total += d * (d - 1.0) / 2.0;
  }
  return total;
}

// Thresholded one-mode projection. `members[r]` lists the groups of row r and
// `groups[g]` lists the rows of group g in increasing order; rows r < t are
// joined when they share at least `threshold` groups.
Graph threshold_projection(const Rows& members, const Rows& groups,
                           count_t threshold, double pair_cap,
                           const char* what) {
  const double projected = pair_budget(groups);
  if (projected > pair_cap) {
    throw ResourceLimitError(std::string(what) + ": projected " +
                             std::to_string(projected) +
                             " co-occurrences exceed the cap of " +
                             std::to_string(pair_cap));
  }
  const std::size_t rows = members.size();
  std::vector<std::uint32_t> shared(rows, 0);
  std::vector<Index> touched;
  std::vector<std::pair<Index, Index>> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (Index g : members.row(r)) {
      const auto peers = groups.row(g);
      auto it = std::upper_bound(peers.begin(), peers.end(), static_cast<Index>(r));
      for (; it != peers.end(); ++it) {
        if (shared[*it]++ == 0) touched.push_back(*it);
      }
    }
    for (Index t : touched) {
      if (shared[t] >= threshold) edges.emplace_back(static_cast<Index>(r), t);
      shared[t] = 0;
    }
    touched.clear();
  }
  return Graph::from_edges(rows, std::move(edges));
}

}  // namespace

Incidence::Incidence(count_t m, std::vector<std::size_t> offsets,
                     std::vector<Index> members)
    : m_(m), offsets_(std::move(offsets)), members_(std::move(members)) {
  if (offsets_.empty() || offsets_.front() != 0 ||
      offsets_.back() != members_.size()) {
    throw std::invalid_argument("Incidence: inconsistent offsets");
  }
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    const auto s = set(i);
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] >= m_ || (k > 0 && s[k - 1] >= s[k])) {
        throw std::invalid_argument(
            "Incidence: sets must be strictly increasing and below m");
      }
    }
  }
}

Incidence::Incidence(count_t m, const std::vector<std::vector<Index>>& sets)
    : Incidence(m, [&] {
        std::vector<std::size_t> offsets{0};
        for (const auto& s : sets) offsets.push_back(offsets.back() + s.size());
        return offsets;
      }(),
                [&] {
                  std::vector<Index> members;
                  for (const auto& s : sets) {
                    members.insert(members.end(), s.begin(), s.end());
                  }
                  return members;
                }()) {}

std::vector<count_t> Incidence::set_sizes() const {
  std::vector<count_t> sizes(size());
  for (std::size_t i = 0; i < size(); ++i) sizes[i] = set(i).size();
  return sizes;
}

std::vector<Index> sample_subset(count_t m, count_t x, RngStream& rng) {
  if (x > m) throw std::invalid_argument("sample_subset: x exceeds m");
  std::vector<Index> out;
  out.reserve(x);
  if (x == m) {
    out.resize(x);
    std::iota(out.begin(), out.end(), Index{0});
    return out;
  }
  if (x == 0) return out;
  if (x * 16 >= m) {
    // Selection sampling: keep index i with probability needed / remaining.
    count_t needed = x;
    for (count_t i = 0; i < m && needed > 0; ++i) {
      if (rng.below(m - i) < needed) {
        out.push_back(static_cast<Index>(i));
        --needed;
      }
    }
    return out;
  }
  if (x <= 512) {
    for (count_t j = m - x; j < m; ++j) {
      const auto t = static_cast<Index>(rng.below(j + 1));
      auto pos = std::lower_bound(out.begin(), out.end(), t);
      if (pos != out.end() && *pos == t) {
        out.push_back(static_cast<Index>(j));  // j exceeds every chosen index
      } else {
        out.insert(pos, t);
      }
    }
    return out;
  }
  std::unordered_set<Index> chosen;
  chosen.reserve(2 * x);
  for (count_t j = m - x; j < m; ++j) {
    const auto t = static_cast<Index>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<Index>(j));
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

Incidence sample_incidence(const ModelParams& params, RngStream& rng) {
  params.validate();
  const auto atoms = params.size_dist.atoms();
  std::vector<double> cumulative(atoms.size());
  double running = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    running += atoms[a].weight;
    cumulative[a] = running;
  }
  std::vector<std::size_t> offsets{0};
  offsets.reserve(params.n + 1);
  std::vector<Index> members;
  for (count_t i = 0; i < params.n; ++i) {
    count_t size = atoms.front().size;
    if (atoms.size() > 1) {
      const double u = rng.uniform01() * running;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t a = std::min<std::size_t>(it - cumulative.begin(),
                                                  atoms.size() - 1);
      size = atoms[a].size;
    }
    const auto subset = sample_subset(params.m, size, rng);
    members.insert(members.end(), subset.begin(), subset.end());
    offsets.push_back(members.size());
  }
  return Incidence(params.m, std::move(offsets), std::move(members));
}

double active_pair_budget(const Incidence& inc) {
  return pair_budget(transpose(inc));
}

double passive_pair_budget(const Incidence& inc) {
  return pair_budget(rows_of(inc));
}

Graph build_active(const Incidence& inc, count_t s, double pair_cap) {
  if (s < 1 || s > inc.m()) {
    throw std::invalid_argument("build_active: s must lie in [1, m]");
  }
  return threshold_projection(rows_of(inc), transpose(inc), s, pair_cap,
                              "build_active");
}

Graph build_passive(const Incidence& inc, count_t s, double pair_cap) {
  if (s < 1 || s > inc.size()) {
    throw std::invalid_argument("build_passive: s must lie in [1, n]");
  }
  return threshold_projection(transpose(inc), rows_of(inc), s, pair_cap,
                              "build_passive");
}

}  // namespace riglab
