#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "riglab/graph.hpp"

namespace riglab {

Graph Graph::from_edges(std::size_t vertex_count,
                        std::vector<std::pair<Index, Index>> edges) {
  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("Graph: self-loop");
    if (u >= vertex_count || v >= vertex_count) {
      throw std::invalid_argument("Graph: vertex out of range");
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [u, v] : edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < vertex_count; ++i) {
    g.offsets_[i + 1] += g.offsets_[i];
  }
  g.neighbors_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Lower neighbors first, then higher ones; sorted edges keep both runs
  // increasing.
  for (const auto& [u, v] : edges) g.neighbors_[cursor[v]++] = u;
  for (const auto& [u, v] : edges) g.neighbors_[cursor[u]++] = v;
  return g;
}

bool Graph::has_edge(Index u, Index v) const {
  const auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<Index, Index>> Graph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(edge_count());
  for (Index u = 0; u < vertex_count(); ++u) {
    for (Index v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool Graph::is_simple() const {
  for (Index u = 0; u < vertex_count(); ++u) {
    const auto adj = neighbors(u);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (adj[i] == u || adj[i] >= vertex_count()) return false;
      if (i > 0 && adj[i - 1] >= adj[i]) return false;
      if (!has_edge(adj[i], u)) return false;
    }
  }
  return true;
}

void write_edge_list(std::ostream& out, const Graph& g,
                     const GraphHeader& header) {
  out << "# rig-lab graph kind=" << to_string(header.kind) << " n=" << header.n
      << " m=" << header.m << " s=" << header.s << " seed=" << header.seed
      << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

EdgeListFile read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# rig-lab graph ", 0) != 0) {
    throw std::runtime_error("edge list: missing '# rig-lab graph' header");
  }
  std::map<std::string, std::string> fields;
  std::istringstream header_stream(line.substr(16));
  std::string token;
  while (header_stream >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("edge list: malformed header field " + token);
    }
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"kind", "n", "m", "s", "seed"}) {
    if (!fields.count(key)) {
      throw std::runtime_error(std::string("edge list: header lacks ") + key);
    }
  }
  EdgeListFile file{};
  file.header.kind = parse_graph_kind(fields["kind"]);
  file.header.n = std::stoull(fields["n"]);
  file.header.m = std::stoull(fields["m"]);
  file.header.s = std::stoull(fields["s"]);
  file.header.seed = std::stoull(fields["seed"]);

  std::vector<std::pair<Index, Index>> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Index u, v;
    if (!(row >> u >> v)) {
      throw std::runtime_error("edge list: malformed edge line: " + line);
    }
    edges.emplace_back(u, v);
  }
  const count_t vertices = file.header.kind == GraphKind::active
                               ? file.header.n
                               : file.header.m;
  try {
    file.graph = Graph::from_edges(vertices, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("edge list: ") + e.what());
  }
  return file;
}

}  // namespace riglab
