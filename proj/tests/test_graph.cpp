#include "particleforge/graph.hpp"

#include <algorithm>

#include "doctest.h"
#include "particleforge/rng.hpp"

using namespace particleforge;

namespace {

Graph path_graph(std::size_t n) {
  GraphBuilder b(n);
  for (VertexId i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1);
  return b.finish();
}

Graph complete_graph(std::size_t n) {
  GraphBuilder b(n);
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) b.add_edge(i, j);
  }
  return b.finish();
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  GraphBuilder b(n);
  rng::Sequence seq(seed, rng::Lane::kScratch);
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if (seq.next_uniform() < p) b.add_edge(i, j);
    }
  }
  return b.finish();
}

}  // namespace

TEST_CASE("graph invariants and edge queries") {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {1, 2}, {3, 1}});
  CHECK(g.edge_count() == 3);  // duplicate collapsed
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(!g.has_edge(0, 2));
  for (VertexId v = 0; v < 4; ++v) {
    auto nbrs = g.neighbors(v);
    CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
    CHECK(std::find(nbrs.begin(), nbrs.end(), v) == nbrs.end());
    for (VertexId w : nbrs) CHECK(g.has_edge(w, v));
  }
  CHECK_THROWS(Graph::from_edges(2, {{0, 0}}));
  CHECK_THROWS(Graph::from_edges(2, {{0, 5}}));
}

TEST_CASE("two_step_graph on a path adds the distance-2 chord") {
  Graph g = path_graph(3);
  Graph gp = two_step_graph(g);
  CHECK(gp.has_edge(0, 1));
  CHECK(gp.has_edge(1, 2));
  CHECK(gp.has_edge(0, 2));
  CHECK(gp.edge_count() == 3);
}

TEST_CASE("two_step_graph keeps an edgeless graph edgeless") {
  Graph g(5);
  CHECK(two_step_graph(g).edge_count() == 0);
}

TEST_CASE("two_step_graph of the 5-cycle is 4-regular") {
  GraphBuilder b(5);
  for (VertexId i = 0; i < 5; ++i) b.add_edge(i, (i + 1) % 5);
  Graph gp = two_step_graph(b.finish());
  for (VertexId v = 0; v < 5; ++v) CHECK(gp.degree(v) == 4);
}

TEST_CASE("two_step idempotence on complete graphs") {
  for (std::size_t n : {2, 3, 5, 7}) {
    Graph kn = complete_graph(n);
    CHECK(two_step_graph(kn) == kn);
  }
}

TEST_CASE("neighborhoods") {
  Graph g = path_graph(3);
  CHECK(neighborhood(g, 0) == std::vector<VertexId>{0, 1});
  CHECK(two_neighborhood(g, 0) == std::vector<VertexId>{0, 1, 2});

  Graph isolated(1);
  CHECK(neighborhood(isolated, 0) == std::vector<VertexId>{0});
  CHECK(two_neighborhood(isolated, 0) == std::vector<VertexId>{0});

  // star: the center reaches everything in two steps, and so do the leaves
  Graph star = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(two_neighborhood(star, 0).size() == 5);
  CHECK(two_neighborhood(star, 1).size() == 5);

  CHECK_THROWS(neighborhood(g, 9));
}

TEST_CASE("two_neighborhood equals neighborhood in the 2-step graph") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = random_graph(7, 0.35, seed);
    Graph gp = two_step_graph(g);
    for (VertexId v = 0; v < 7; ++v) {
      CHECK(two_neighborhood(g, v) == neighborhood(gp, v));
    }
  }
}

TEST_CASE("graph_distance") {
  Graph g = path_graph(3);
  CHECK(graph_distance(g, 1, 1) == 0);
  CHECK(graph_distance(g, 0, 2) == 2);

  Graph two(2);
  CHECK(!graph_distance(two, 0, 1).has_value());
  CHECK_THROWS(graph_distance(two, 0, 7));
}

TEST_CASE("distance in the 2-step graph halves the distance, rounded up") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = random_graph(8, 0.3, seed);
    Graph gp = two_step_graph(g);
    for (VertexId u = 0; u < 8; ++u) {
      for (VertexId v = 0; v < 8; ++v) {
        auto d = graph_distance(g, u, v);
        auto dp = graph_distance(gp, u, v);
        if (d.has_value()) {
          REQUIRE(dp.has_value());
          CHECK(*dp == (*d + 1) / 2);
        } else {
          CHECK(!dp.has_value());
        }
      }
    }
  }
}

TEST_CASE("json round trip is bit exact") {
  Graph g = random_graph(9, 0.4, 7);
  std::string text = g.to_json();
  Graph back = Graph::from_json(text);
  CHECK(back == g);
  CHECK(back.to_json() == text);
}

TEST_CASE("window ambient is the two-step closure of the core") {
  Graph g = path_graph(6);
  Window w = Window::make(g, {2, 3});
  CHECK(w.core == std::vector<VertexId>{2, 3});
  CHECK(w.ambient == std::vector<VertexId>{0, 1, 2, 3, 4, 5});
  CHECK(w.in_core(2));
  CHECK(!w.in_core(1));
  CHECK(w.in_ambient(0));

  Window w2 = Window::make(g, {0});
  CHECK(w2.ambient == std::vector<VertexId>{0, 1, 2});
}
