#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace particleforge {

using VertexId = std::uint32_t;

/// Finite window of a locally finite graph: undirected, simple, no
/// self-loops. Vertices are dense ids 0..n-1; adjacency lists are kept
/// sorted so iteration order (and hence RNG consumption downstream) is
/// deterministic. Immutable once built.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adjacency_(n) {}

  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<VertexId, VertexId>>& edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;
  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

  /// Sorted neighbors of v, excluding v itself.
  std::span<const VertexId> neighbors(VertexId v) const {
    return adjacency_.at(v);
  }

  bool has_vertex(VertexId v) const { return v < adjacency_.size(); }
  bool has_edge(VertexId u, VertexId v) const;

  /// Sorted edge list with u < v.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  /// {"n": int, "edges": [[u,v],...]} with u<v, lexicographic order.
  std::string to_json() const;
  static Graph from_json(const std::string& text);

  bool operator==(const Graph& other) const { return adjacency_ == other.adjacency_; }

 private:
  friend class GraphBuilder;
  std::vector<std::vector<VertexId>> adjacency_;
};

/// Incremental construction helper; finish() sorts, dedups and validates.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) : adjacency_(n) {}
  void add_edge(VertexId u, VertexId v);
  Graph finish();

 private:
  std::vector<std::vector<VertexId>> adjacency_;
};

/// N_v: v together with its neighbors, sorted.
std::vector<VertexId> neighborhood(const Graph& g, VertexId v);

/// N_v^+: all w whose neighborhood intersects N_v (contains v), sorted.
std::vector<VertexId> two_neighborhood(const Graph& g, VertexId v);

/// Same vertex set; u~v iff they are at distance <= 2 in g.
Graph two_step_graph(const Graph& g);

/// BFS distance; nullopt if unreachable.
std::optional<int> graph_distance(const Graph& g, VertexId u, VertexId v);

/// BFS distances from source; -1 marks unreachable vertices.
std::vector<int> distances_from(const Graph& g, VertexId source);

/// Finite window: core vertices plus the ambient closure needed so every
/// rate evaluation and update at a core vertex stays inside the window.
/// Ambient is the union of two-neighborhoods of core, computed eagerly.
struct Window {
  std::vector<VertexId> core;     // sorted
  std::vector<VertexId> ambient;  // sorted, contains core

  static Window make(const Graph& g, std::vector<VertexId> core_vertices);
  static Window full(const Graph& g);

  bool in_core(VertexId v) const;
  bool in_ambient(VertexId v) const;
};

}  // namespace particleforge
