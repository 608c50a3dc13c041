#include "particleforge/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace particleforge {

namespace {

void check_vertex(const Graph& g, VertexId v, const char* who) {
  if (!g.has_vertex(v)) {
    throw std::invalid_argument(std::string(who) + ": unknown vertex " + std::to_string(v));
  }
}

}  // namespace

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<VertexId, VertexId>>& edges) {
  GraphBuilder b(n);
  for (auto [u, v] : edges) b.add_edge(u, v);
  return b.finish();
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto& adj = adjacency_.at(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<VertexId, VertexId>> Graph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < adjacency_.size(); ++u) {
    for (VertexId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::string Graph::to_json() const {
  nlohmann::json j;
  j["n"] = vertex_count();
  auto es = edges();
  nlohmann::json arr = nlohmann::json::array();
  for (auto [u, v] : es) arr.push_back({u, v});
  j["edges"] = std::move(arr);
  return j.dump();
}

Graph Graph::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::size_t n = j.at("n").get<std::size_t>();
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("Graph::from_json: malformed edge entry");
    }
    edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
  }
  return from_edges(n, edges);
}

void GraphBuilder::add_edge(VertexId u, VertexId v) {
  if (u >= adjacency_.size() || v >= adjacency_.size()) {
    throw std::invalid_argument("GraphBuilder: edge endpoint out of range");
  }
  if (u == v) throw std::invalid_argument("GraphBuilder: self-loop rejected");
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
}

Graph GraphBuilder::finish() {
  Graph g;
  g.adjacency_ = std::move(adjacency_);
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  adjacency_.clear();
  return g;
}

std::vector<VertexId> neighborhood(const Graph& g, VertexId v) {
  check_vertex(g, v, "neighborhood");
  std::vector<VertexId> out;
  auto nbrs = g.neighbors(v);
  out.reserve(nbrs.size() + 1);
  // merge {v} into the sorted neighbor list
  bool placed = false;
  for (VertexId w : nbrs) {
    if (!placed && v < w) {
      out.push_back(v);
      placed = true;
    }
    out.push_back(w);
  }
  if (!placed) out.push_back(v);
  return out;
}

std::vector<VertexId> two_neighborhood(const Graph& g, VertexId v) {
  check_vertex(g, v, "two_neighborhood");
  // N_v^+ = union of N_w over w in N_v
  std::vector<VertexId> out = neighborhood(g, v);
  std::vector<VertexId> acc = out;
  for (VertexId w : g.neighbors(v)) {
    auto nw = neighborhood(g, w);
    acc.insert(acc.end(), nw.begin(), nw.end());
  }
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  return acc;
}

Graph two_step_graph(const Graph& g) {
  GraphBuilder b(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (VertexId w : two_neighborhood(g, v)) {
      if (v < w) b.add_edge(v, w);
    }
  }
  return b.finish();
}

std::vector<int> distances_from(const Graph& g, VertexId source) {
  check_vertex(g, source, "distances_from");
  std::vector<int> dist(g.vertex_count(), -1);
  std::deque<VertexId> queue;
  dist[source] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    for (VertexId w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::optional<int> graph_distance(const Graph& g, VertexId u, VertexId v) {
  check_vertex(g, u, "graph_distance");
  check_vertex(g, v, "graph_distance");
  int d = distances_from(g, u)[v];
  if (d < 0) return std::nullopt;
  return d;
}

Window Window::make(const Graph& g, std::vector<VertexId> core_vertices) {
  std::sort(core_vertices.begin(), core_vertices.end());
  core_vertices.erase(std::unique(core_vertices.begin(), core_vertices.end()),
                      core_vertices.end());
  std::vector<VertexId> ambient;
  for (VertexId v : core_vertices) {
    check_vertex(g, v, "Window::make");
    auto np = two_neighborhood(g, v);
    ambient.insert(ambient.end(), np.begin(), np.end());
  }
  std::sort(ambient.begin(), ambient.end());
  ambient.erase(std::unique(ambient.begin(), ambient.end()), ambient.end());
  return Window{std::move(core_vertices), std::move(ambient)};
}

Window Window::full(const Graph& g) {
  std::vector<VertexId> all(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) all[v] = v;
  return Window{all, all};
}

bool Window::in_core(VertexId v) const {
  return std::binary_search(core.begin(), core.end(), v);
}

bool Window::in_ambient(VertexId v) const {
  return std::binary_search(ambient.begin(), ambient.end(), v);
}

}  // namespace particleforge
