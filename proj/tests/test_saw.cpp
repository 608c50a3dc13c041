#include "particleforge/saw.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "brute_oracle.hpp"
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

std::set<Walk> as_set(const std::vector<Walk>& walks) { return {walks.begin(), walks.end()}; }

}  // namespace

TEST_CASE("enumerate_saws basics") {
  Graph p3 = path_graph(3);
  auto walks = enumerate_saws(p3, 0, 2);
  REQUIRE(walks.size() == 1);
  CHECK(walks[0] == Walk{0, 1, 2});

  Graph k3 = complete_graph(3);
  CHECK(enumerate_saws(k3, 0, 2).size() == 2);

  // n=1 gives one walk per neighbor
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = random_graph(6, 0.5, seed);
    for (VertexId v = 0; v < 6; ++v) {
      CHECK(enumerate_saws(g, v, 1).size() == g.degree(v));
    }
  }

  CHECK_THROWS(enumerate_saws(p3, 9, 1));
  CHECK_THROWS(enumerate_saws(p3, 0, 0));
  CHECK_THROWS(enumerate_saws(p3, 0, saw_length_cap() + 1));
}

TEST_CASE("enumerate_saws is lexicographic and matches the brute oracle") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Graph g = random_graph(7, 0.45, seed);
    brute::AdjMatrix m = brute::AdjMatrix::from(g);
    for (int n = 1; n <= 4; ++n) {
      auto walks = enumerate_saws(g, 0, n);
      CHECK(std::is_sorted(walks.begin(), walks.end()));
      CHECK(as_set(walks) == as_set(brute::saws(m, 0, n)));
    }
  }
}

TEST_CASE("is_remnant_saw examples") {
  // a SAW in g is a remnant of itself
  Graph p3 = path_graph(3);
  CHECK(is_remnant_saw(p3, Walk{0, 1, 2}));

  // skipping over the middle vertex of a path is a remnant via insertion
  CHECK(is_remnant_saw(p3, Walk{0, 2}));

  // the bridge vertex cannot be reused once it sits on the walk itself
  CHECK_FALSE(is_remnant_saw(p3, Walk{0, 2, 1}));

  // two gaps competing for one common neighbor
  // star-like: 0-1, 1-2, 0-3, 3-4 with extra edges so walks live in g+
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  // walk (0,2,4) needs bridges 1 and 3, both available and distinct
  CHECK(is_remnant_saw(g, Walk{0, 2, 4}));

  CHECK_THROWS(is_remnant_saw(p3, Walk{0, 1, 0}));  // not a SAW
}

TEST_CASE("is_remnant_saw rejects when the two gaps share a unique bridge") {
  // 0 and 2 share only bridge 1; 2 and 4 share only bridge 1 as well.
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {1, 4}, {2, 3}});
  Graph gp = two_step_graph(g);
  REQUIRE(gp.has_edge(0, 2));
  REQUIRE(gp.has_edge(2, 4));
  CHECK_FALSE(is_remnant_saw(g, Walk{0, 2, 4}));
  // while each single hop alone is fine
  CHECK(is_remnant_saw(g, Walk{0, 2}));
  CHECK(is_remnant_saw(g, Walk{2, 4}));
}

TEST_CASE("is_remnant_saw agrees with the definition-driven oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = random_graph(6, 0.35, seed);
    Graph gp = two_step_graph(g);
    for (int n = 1; n <= 3; ++n) {
      for (const Walk& w : enumerate_saws(gp, 0, n)) {
        CHECK(is_remnant_saw(g, gp, w) == brute::is_remnant(g, w));
      }
    }
  }
}

TEST_CASE("remnant SAW sandwich: SAW subset of SAW* subset of SAW in g+") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = random_graph(7, 0.3, seed);
    Graph gp = two_step_graph(g);
    for (int n = 1; n <= 3; ++n) {
      auto plain = as_set(enumerate_saws(g, 0, n));
      auto remnant = as_set(enumerate_remnant_saws(g, 0, n));
      auto two_step = as_set(enumerate_saws(gp, 0, n));
      CHECK(std::includes(remnant.begin(), remnant.end(), plain.begin(), plain.end()));
      CHECK(std::includes(two_step.begin(), two_step.end(), remnant.begin(), remnant.end()));
    }
  }
}

TEST_CASE("K3 remnant SAWs fill the whole 2-step set") {
  Graph k3 = complete_graph(3);
  Graph gp = two_step_graph(k3);
  CHECK(as_set(enumerate_remnant_saws(k3, 0, 2)) == as_set(enumerate_saws(gp, 0, 2)));
}

TEST_CASE("prefixes of remnant SAWs are remnant SAWs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Graph g = random_graph(7, 0.35, seed);
    Graph gp = two_step_graph(g);
    for (const Walk& w : enumerate_remnant_saws(g, 0, 4)) {
      for (std::size_t len = 2; len < w.size(); ++len) {
        Walk prefix(w.begin(), w.begin() + len);
        CHECK(is_remnant_saw(g, gp, prefix));
      }
    }
  }
}

TEST_CASE("reduce_path_to_remnant_saw") {
  Graph g = path_graph(5);
  Graph gp = two_step_graph(g);

  SUBCASE("a remnant SAW is returned unchanged") {
    Walk w{0, 2, 4};
    CHECK(reduce_path_to_remnant_saw(g, gp, w) == w);
  }

  SUBCASE("revisiting paths shrink but keep endpoints") {
    Walk w{0, 1, 2, 1, 2, 3};
    Walk r = reduce_path_to_remnant_saw(g, gp, w);
    CHECK(r.front() == 0);
    CHECK(r.back() == 3);
    CHECK(r.size() < w.size());
    CHECK(is_remnant_saw(g, gp, r));
  }

  SUBCASE("random g+ paths reduce to remnant SAWs (oracle check)") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      Graph h = random_graph(8, 0.3, seed);
      Graph hp = two_step_graph(h);
      rng::Sequence seq(seed, rng::Lane::kProbe);
      for (int rep = 0; rep < 20; ++rep) {
        // random walk in g+ of random length
        VertexId v = static_cast<VertexId>(seq.next_bits() % 8);
        Walk path{v};
        int len = 1 + static_cast<int>(seq.next_bits() % 10);
        for (int i = 0; i < len; ++i) {
          auto nbrs = hp.neighbors(path.back());
          if (nbrs.empty()) break;
          path.push_back(nbrs[seq.next_bits() % nbrs.size()]);
        }
        Walk r = reduce_path_to_remnant_saw(h, hp, path);
        CHECK(r.front() == path.front());
        CHECK(r.back() == path.back());
        // subsequence of the input
        std::size_t pos = 0;
        for (VertexId u : path) {
          if (pos < r.size() && r[pos] == u) ++pos;
        }
        CHECK(pos == r.size());
        if (r.size() >= 2) CHECK(is_remnant_saw(h, hp, r));
      }
    }
  }

  SUBCASE("rejects non-paths") {
    CHECK_THROWS(reduce_path_to_remnant_saw(g, gp, Walk{0, 4}));
  }
}

TEST_CASE("trail_table worked examples") {
  // P4 with constant rate 2: one 2-step SAW from the end, interior rate 2
  Graph p4 = path_graph(4);
  std::vector<double> two(4, 2.0);
  TrailTable t = trail_table(p4, two, 0, 3);
  CHECK(t.raw_simple_at(2) == 2.0);
  CHECK(t.theta_simple_at(2) == 2.0);
  // n=3: single SAW 0-1-2-3, interior product 2*2, root 1/2
  CHECK(t.raw_simple_at(3) == 4.0);
  CHECK(t.theta_simple_at(3) == doctest::Approx(2.0));

  // unit rates collapse to SAW counting
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = random_graph(7, 0.4, seed);
    std::vector<double> ones(7, 1.0);
    TrailTable tt = trail_table(g, ones, 0, 4);
    for (int n = 2; n <= 4; ++n) {
      CHECK(tt.raw_simple_at(n) == static_cast<double>(enumerate_saws(g, 0, n).size()));
    }
  }

  // isolated vertex: no SAWs, all trails zero
  Graph lonely(3);
  std::vector<double> ones(3, 1.0);
  TrailTable tl = trail_table(lonely, ones, 0, 3);
  CHECK(tl.raw_simple_at(2) == 0.0);
  CHECK(tl.theta_double_at(2) == 0.0);

  CHECK_THROWS(trail_table(p4, std::vector<double>{1, 1, -1, 1}, 0, 3));
}

TEST_CASE("trail_table matches the brute-force enumerator exactly") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = random_graph(8, 0.35, seed);
    std::vector<double> rates(8);
    rng::Sequence seq(seed, rng::Lane::kMark);
    for (double& c : rates) c = 0.1 + 4.9 * seq.next_uniform();
    TrailTable t = trail_table(g, rates, 0, 4);
    brute::AdjMatrix m = brute::AdjMatrix::from(g);
    for (int n = 2; n <= 4; ++n) {
      double simple = brute::trail_raw_sum(brute::saws(m, 0, n), rates);
      double dbl = brute::trail_raw_sum(brute::remnant_saws(g, 0, n), rates);
      CHECK(t.raw_simple_at(n) == doctest::Approx(simple).epsilon(1e-12));
      CHECK(t.raw_double_at(n) == doctest::Approx(dbl).epsilon(1e-12));
    }
  }
}

TEST_CASE("simple raw sums never exceed double raw sums") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = random_graph(7, 0.35, seed);
    std::vector<double> rates(7);
    rng::Sequence seq(seed, rng::Lane::kMark);
    for (double& c : rates) c = 0.1 + 2.0 * seq.next_uniform();
    TrailTable t = trail_table(g, rates, 0, 4);
    for (int n = 2; n <= 4; ++n) {
      CHECK(t.raw_simple_at(n) <= t.raw_double_at(n) + 1e-12);
    }
  }
}

TEST_CASE("shifted trail sums on an interior lattice stretch") {
  // On a Z window away from the boundary every remnant SAW extends, so the
  // shifted n-sum is dominated by the (n+1)-step raw sum.
  GraphBuilder b(21);
  for (VertexId i = 0; i + 1 < 21; ++i) b.add_edge(i, i + 1);
  Graph z = b.finish();
  std::vector<double> rates(21);
  rng::Sequence seq(7, rng::Lane::kMark);
  for (double& c : rates) c = 0.5 + 2.0 * seq.next_uniform();
  TrailTable t = trail_table(z, rates, 10, 5);
  for (int n = 2; n <= 4; ++n) {
    CHECK(t.raw_shifted_at(n) <= t.raw_double_at(n + 1) + 1e-12);
  }
}

TEST_CASE("shifted sums decompose over one-step extensions") {
  // Exact finite-window content of the shifted-trail comparison: the
  // (n+1)-step raw sum equals the shifted n-sum restricted to walks that
  // extend, counted once per extension.
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Graph g = random_graph(7, 0.35, seed);
    Graph gp = two_step_graph(g);
    std::vector<double> rates(7);
    rng::Sequence seq(seed, rng::Lane::kMark);
    for (double& c : rates) c = 0.1 + 2.0 * seq.next_uniform();
    TrailTable t = trail_table(g, rates, 0, 4);
    for (int n = 2; n <= 3; ++n) {
      double from_extensions = 0.0;
      for (const Walk& w : enumerate_remnant_saws(g, 0, n + 1)) {
        double prod = 1.0;
        for (std::size_t i = 1; i + 1 < w.size(); ++i) prod *= rates[w[i]];
        from_extensions += prod;
      }
      CHECK(t.raw_double_at(n + 1) == doctest::Approx(from_extensions).epsilon(1e-12));
      double extendable_shifted = 0.0;
      for (const Walk& w : enumerate_remnant_saws(g, 0, n)) {
        bool extends = false;
        for (VertexId z : gp.neighbors(w.back())) {
          if (std::find(w.begin(), w.end(), z) != w.end()) continue;
          Walk longer = w;
          longer.push_back(z);
          if (is_remnant_saw(g, gp, longer)) {
            extends = true;
            break;
          }
        }
        if (!extends) continue;
        double prod = 1.0;
        for (std::size_t i = 1; i < w.size(); ++i) prod *= rates[w[i]];
        extendable_shifted += prod;
      }
      CHECK(extendable_shifted <= t.raw_double_at(n + 1) + 1e-9);
    }
  }
}

TEST_CASE("connective constant estimates") {
  // interior of a long Z window counts exactly 2 SAWs per length
  GraphBuilder b(31);
  for (VertexId i = 0; i + 1 < 31; ++i) b.add_edge(i, i + 1);
  Graph z = b.finish();
  auto est = connective_constant_estimate(z, 15, 6);
  for (int n = 1; n <= 6; ++n) {
    CHECK(est[n - 1] == doctest::Approx(std::pow(2.0, 1.0 / n)));
  }

  Graph k3 = complete_graph(3);
  CHECK(connective_constant_estimate(k3, 0, 1)[0] == 2.0);

  Graph empty(4);
  CHECK(connective_constant_estimate(empty, 0, 3) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("trail CSV has the documented columns") {
  Graph p3 = path_graph(3);
  std::vector<double> ones(3, 1.0);
  TrailTable t = trail_table(p3, ones, 0, 3);
  CHECK(TrailTable::csv_header() ==
        "vertex,n,raw_sum_simple,theta_simple,raw_sum_double,theta_double");
  std::string rows = t.to_csv_rows();
  CHECK(rows.find("0,2,") == 0);
}
