#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "riglab/model.hpp"

namespace riglab {

using Index = std::uint32_t;

/// Simple undirected graph in compressed adjacency form; each neighbor list
/// is strictly increasing and never contains its own vertex.
class Graph {
 public:
  Graph() = default;

  /// Builds from undirected edges; duplicates and orientation are
  /// normalized away. Self-loops throw std::invalid_argument.
  static Graph from_edges(std::size_t vertex_count,
                          std::vector<std::pair<Index, Index>> edges);

  std::size_t vertex_count() const {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const Index> neighbors(Index v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Index u, Index v) const;

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Index, Index>> edges() const;

  /// True when adjacency is symmetric, sorted, loop-free and duplicate-free.
  bool is_simple() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Index> neighbors_;
};

/// Metadata written on the header line of an exported edge list.
struct GraphHeader {
  GraphKind kind;
  count_t n;
  count_t m;
  count_t s;
  std::uint64_t seed;
};

/// Writes `# rig-lab graph kind=.. n=.. m=.. s=.. seed=..` followed by one
/// `u v` line per edge, u < v, sorted.
void write_edge_list(std::ostream& out, const Graph& g, const GraphHeader& header);

struct EdgeListFile {
  GraphHeader header;
  Graph graph;
};

/// Parses the format written by write_edge_list. Throws std::runtime_error on
/// malformed input.
EdgeListFile read_edge_list(std::istream& in);

}  // namespace riglab
