#pragma once

// Undirected simple graphs in compressed adjacency form, the three
// topologies used by the agent-based runs, and the edge-list text format
//
//   # nodes=<N>
//   u v
//   ...
//
// with 0-based node ids and one undirected edge per line.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qalv/rng.hpp"

namespace qalv::net {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

class Network {
 public:
  Network() = default;

  /// Builds from an edge list. Duplicate edges collapse; self-loops and
  /// out-of-range endpoints throw.
  static Network from_edges(std::size_t num_nodes, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
      if (u >= num_nodes || v >= num_nodes) throw std::invalid_argument("network: edge endpoint out of range");
      if (u == v) throw std::invalid_argument("network: self-loop on node " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Network g;
    g.offsets_.assign(num_nodes + 1, 0);
    for (const auto& [u, v] : edges) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(2 * edges.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      g.neighbors_[fill[u]++] = v;
      g.neighbors_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < num_nodes; ++i)
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    return g;
  }

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  std::span<const NodeId> neighbors(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], degree(i)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges with u < v, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  double mean_degree() const { return num_nodes() ? 2.0 * static_cast<double>(num_edges()) / num_nodes() : 0.0; }

  std::size_t min_degree() const {
    std::size_t m = num_nodes() ? degree(0) : 0;
    for (std::size_t i = 1; i < num_nodes(); ++i) m = std::min(m, degree(i));
    return m;
  }

  bool operator==(const Network&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

namespace detail {

// Mutable adjacency used while generating random graphs.
struct AdjacencyBuilder {
  std::vector<std::vector<NodeId>> adj;

  explicit AdjacencyBuilder(std::size_t n) : adj(n) {}

  bool has(NodeId u, NodeId v) const { return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end(); }
  void add(NodeId u, NodeId v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  void remove(NodeId u, NodeId v) {
    adj[u].erase(std::find(adj[u].begin(), adj[u].end(), v));
    adj[v].erase(std::find(adj[v].begin(), adj[v].end(), u));
  }

  // Attach every isolated node to one uniformly chosen other node, in id order.
  void repair_isolated(rng::Engine& eng) {
    const std::size_t n = adj.size();
    for (NodeId i = 0; i < n; ++i) {
      if (!adj[i].empty()) continue;
      auto j = static_cast<NodeId>(rng::uniform_index(eng, n - 1));
      if (j >= i) ++j;
      add(i, j);
    }
  }

  Network finish() const {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < adj.size(); ++u)
      for (NodeId v : adj[u])
        if (u < v) edges.emplace_back(u, v);
    return Network::from_edges(adj.size(), std::move(edges));
  }
};

}  // namespace detail

/// side x side grid with von Neumann neighbourhoods. With periodic wrap and
/// side == 2 the duplicate neighbours collapse, leaving degree 2.
inline Network build_square_lattice(std::size_t side, bool periodic = true) {
  if (side < 2) throw std::invalid_argument("square lattice: side must be >= 2");
  auto id = [side](std::size_t row, std::size_t col) { return static_cast<NodeId>(row * side + col); };
  std::vector<Edge> edges;
  edges.reserve(2 * side * side);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      if (col + 1 < side) edges.emplace_back(id(row, col), id(row, col + 1));
      else if (periodic) edges.emplace_back(id(row, col), id(row, 0));
      if (row + 1 < side) edges.emplace_back(id(row, col), id(row + 1, col));
      else if (periodic) edges.emplace_back(id(row, col), id(0, col));
    }
  }
  // With side == 2 the wrap edge repeats the interior one; from_edges drops it.
  return Network::from_edges(side * side, std::move(edges));
}

/// Watts-Strogatz rewiring of the periodic lattice. Each edge (u, v), u < v,
/// visited in sorted order, is rewired with probability p to (u, w) where w is
/// uniform over nodes that are neither u nor already adjacent to u.
inline Network build_small_world(std::size_t side, double rewire_p, std::uint64_t seed) {
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0)) throw std::invalid_argument("small world: rewire_p must lie in [0, 1]");
  const Network lattice = build_square_lattice(side, true);
  const std::size_t n = lattice.num_nodes();
  detail::AdjacencyBuilder b(n);
  for (const auto& [u, v] : lattice.edges()) b.add(u, v);

  auto eng = rng::make_engine(seed);
  for (const auto& [u, v] : lattice.edges()) {
    if (!(rng::uniform01(eng) < rewire_p)) continue;
    if (b.adj[u].size() >= n - 1) continue;  // u already touches everyone
    NodeId w;
    do {
      w = static_cast<NodeId>(rng::uniform_index(eng, n));
    } while (w == u || b.has(u, w));
    b.remove(u, v);
    b.add(u, w);
  }
  b.repair_isolated(eng);
  return b.finish();
}

/// G(n, p) with p = avg_degree / (n - 1); isolated nodes are then attached to
/// a uniformly random other node.
inline Network build_erdos_renyi(std::size_t num_nodes, double avg_degree, std::uint64_t seed) {
  if (num_nodes < 2) throw std::invalid_argument("erdos-renyi: num_nodes must be >= 2");
  if (!(avg_degree > 0.0 && avg_degree < static_cast<double>(num_nodes - 1)))
    throw std::invalid_argument("erdos-renyi: avg_degree must lie in (0, num_nodes - 1)");
  const double p = avg_degree / static_cast<double>(num_nodes - 1);
  auto eng = rng::make_engine(seed);
  detail::AdjacencyBuilder b(num_nodes);
  for (NodeId u = 0; u < num_nodes; ++u)
    for (NodeId v = u + 1; v < num_nodes; ++v)
      if (rng::uniform01(eng) < p) b.add(u, v);
  b.repair_isolated(eng);
  return b.finish();
}

inline void write_edge_list(std::ostream& os, const Network& g) {
  os << "# nodes=" << g.num_nodes() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Network read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# nodes=", 0) != 0)
    throw std::invalid_argument("edge list: missing '# nodes=<N>' header");
  std::size_t n = 0;
  try {
    n = std::stoul(line.substr(8));
  } catch (const std::exception&) {
    throw std::invalid_argument("edge list: bad node count in header");
  }
  std::vector<Edge> edges;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0)
      throw std::invalid_argument("edge list: malformed line " + std::to_string(lineno));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Network::from_edges(n, std::move(edges));
}

}  // namespace qalv::net
