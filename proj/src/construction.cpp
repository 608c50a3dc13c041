#include "particleforge/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "particleforge/parallel.hpp"
#include "particleforge/rng.hpp"
#include "particleforge/saw.hpp"

namespace particleforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_query(const Graph& g, const ClockRealization& clocks, VertexId v, double t,
                 const char* who) {
  if (!g.has_vertex(v)) throw std::invalid_argument(std::string(who) + ": unknown vertex");
  if (t > clocks.horizon) {
    throw std::invalid_argument(std::string(who) + ": query time exceeds clock horizon");
  }
  if (clocks.events.size() != g.vertex_count()) {
    throw std::invalid_argument(std::string(who) + ": clocks do not match graph");
  }
}

/// Earliest event of z strictly after time, or +inf.
double first_event_after(const ClockRealization& clocks, VertexId z, double time) {
  const auto& ev = clocks.events[z];
  auto it = std::upper_bound(ev.begin(), ev.end(), time,
                             [](double t, const ClockEvent& e) { return t < e.time; });
  return it == ev.end() ? kInf : it->time;
}

/// Latest event of z at time <= bound (strict=false) or < bound (strict),
/// or -inf.
double last_event_before(const ClockRealization& clocks, VertexId z, double bound, bool strict) {
  const auto& ev = clocks.events[z];
  auto cmp = [](const ClockEvent& e, double t) { return e.time < t; };
  auto it = strict ? std::lower_bound(ev.begin(), ev.end(), bound, cmp)
                   : std::upper_bound(ev.begin(), ev.end(), bound,
                                      [](double t, const ClockEvent& e) { return t < e.time; });
  return it == ev.begin() ? -kInf : std::prev(it)->time;
}

}  // namespace

SpaceTimeGraph::SpaceTimeGraph(const Graph& g, HopMode mode)
    : hops_(mode == HopMode::kTwoStep ? two_step_graph(g) : g), mode_(mode) {}

bool affects(const SpaceTimeGraph& st, const ClockRealization& clocks, VertexId w, VertexId v,
             double t) {
  check_query(st.hop_graph(), clocks, w, t, "affects");
  check_query(st.hop_graph(), clocks, v, t, "affects");
  if (w == v) return true;  // empty path

  const Graph& hops = st.hop_graph();
  // Earliest reachable event time per vertex; hops from (u,T) go to events
  // of hop-neighbors strictly after T. Later events of u itself never widen
  // the reach, so self-hops are skipped.
  std::vector<double> reach(hops.vertex_count(), kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, w});
  std::vector<char> done(hops.vertex_count(), 0);
  reach[w] = 0.0;
  while (!heap.empty()) {
    auto [T, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == v) return T <= t;
    for (VertexId z : hops.neighbors(u)) {
      if (done[z]) continue;
      double e = first_event_after(clocks, z, T);
      if (e <= t && e < reach[z]) {
        reach[z] = e;
        heap.push({e, z});
      }
    }
  }
  return false;
}

bool affects(const Graph& g, const ClockRealization& clocks, VertexId w, VertexId v, double t,
             HopMode mode) {
  return affects(SpaceTimeGraph(g, mode), clocks, w, v, t);
}

std::vector<VertexId> cluster(const SpaceTimeGraph& st, const Graph& g,
                              const ClockRealization& clocks, VertexId v, double t) {
  check_query(g, clocks, v, t, "cluster");
  const Graph& hops = st.hop_graph();

  // Backward sweep. An event of z is "good" when a directed path from it
  // reaches an event of some hop-neighbor of v at time <= t (possibly the
  // event itself). Goodness is downward closed in time per vertex via the
  // self-hop, so the latest good event time per vertex characterizes it.
  std::vector<double> latest_good(hops.vertex_count(), -kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item> heap;

  std::vector<VertexId> targets = neighborhood(hops, v);  // hop nbhd incl v
  for (VertexId z : targets) {
    double e = last_event_before(clocks, z, t, /*strict=*/false);
    if (e > latest_good[z]) {
      latest_good[z] = e;
      heap.push({e, z});
    }
  }
  std::vector<char> done(hops.vertex_count(), 0);
  while (!heap.empty()) {
    auto [T, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (VertexId z : hops.neighbors(u)) {
      if (done[z]) continue;
      double e = last_event_before(clocks, z, T, /*strict=*/true);
      if (e > latest_good[z]) {
        latest_good[z] = e;
        heap.push({e, z});
      }
    }
  }

  // w joins the cluster through any first hop (w,0) -> good event, or
  // reflexively when w is a hop-neighbor of v.
  std::vector<VertexId> out = targets;
  for (VertexId w = 0; w < hops.vertex_count(); ++w) {
    bool in = latest_good[w] > 0.0;
    if (!in) {
      for (VertexId z : hops.neighbors(w)) {
        if (latest_good[z] > 0.0) {
          in = true;
          break;
        }
      }
    }
    if (in) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VertexId> cluster(const Graph& g, const ClockRealization& clocks, VertexId v, double t,
                              HopMode mode) {
  return cluster(SpaceTimeGraph(g, mode), g, clocks, v, t);
}

GenerationPartition generations(const SpaceTimeGraph& st, const ClockRealization& clocks) {
  const Graph& hops = st.hop_graph();
  if (clocks.events.size() != hops.vertex_count()) {
    throw std::invalid_argument("generations: clocks do not match graph");
  }
  GenerationPartition part;
  part.gen.resize(hops.vertex_count());
  for (VertexId v = 0; v < hops.vertex_count(); ++v) {
    part.gen[v].assign(clocks.events[v].size(), 0);
  }

  struct Ev {
    double time;
    VertexId vertex;
    std::uint32_t index;
  };
  std::vector<Ev> order;
  order.reserve(clocks.total_events());
  for (VertexId v = 0; v < hops.vertex_count(); ++v) {
    for (std::uint32_t i = 0; i < clocks.events[v].size(); ++i) {
      order.push_back({clocks.events[v][i].time, v, i});
    }
  }
  std::sort(order.begin(), order.end(), [](const Ev& a, const Ev& b) {
    return a.time != b.time ? a.time < b.time : a.vertex < b.vertex;
  });

  // Longest-path labels via one chronological sweep: the generation of an
  // event at v is one more than the largest label among all earlier points
  // of v and its hop-neighbors ((u,0) carries label 0).
  std::vector<int> max_label(hops.vertex_count(), 0);
  for (const Ev& e : order) {
    int best = max_label[e.vertex];
    for (VertexId u : hops.neighbors(e.vertex)) best = std::max(best, max_label[u]);
    int gen = best + 1;
    part.gen[e.vertex][e.index] = gen;
    max_label[e.vertex] = gen;
  }
  return part;
}

GenerationPartition generations(const Graph& g, const ClockRealization& clocks, HopMode mode) {
  return generations(SpaceTimeGraph(g, mode), clocks);
}

namespace {

struct TailSearch {
  const Graph& base;
  const Graph& hops;
  const ClockRealization& clocks;
  const std::vector<int>& dist;  // hop-graph distances from v
  double horizon;
  int n;
  bool remnant_filter;

  bool prefix_ok(const Walk& walk) const {
    return !remnant_filter || is_remnant_saw(base, hops, walk);
  }

  bool forward(Walk& walk, std::vector<char>& visited, double arrive) const {
    for (VertexId z : hops.neighbors(walk.back())) {
      if (visited[z]) continue;
      double e = first_event_after(clocks, z, arrive);
      if (e > horizon) continue;
      walk.push_back(z);
      visited[z] = 1;
      bool hit = false;
      if (prefix_ok(walk)) {
        hit = dist[z] >= n || forward(walk, visited, e);
      }
      visited[z] = 0;
      walk.pop_back();
      if (hit) return true;
    }
    return false;
  }

  bool reverse(Walk& walk, std::vector<char>& visited, double deadline) const {
    for (VertexId z : hops.neighbors(walk.back())) {
      if (visited[z]) continue;
      walk.push_back(z);
      visited[z] = 1;
      bool hit = false;
      if (prefix_ok(walk)) {
        // z can close the path from (z,0) without an event of its own.
        if (dist[z] >= n) {
          hit = true;
        } else {
          double e = last_event_before(clocks, z, deadline, /*strict=*/true);
          if (e > 0.0 && e != -kInf) hit = reverse(walk, visited, e);
        }
      }
      visited[z] = 0;
      walk.pop_back();
      if (hit) return true;
    }
    return false;
  }
};

}  // namespace

bool direct_affect_escape(const SpaceTimeGraph& st, const Graph& g, const ClockRealization& clocks,
                          VertexId v, double t, int n) {
  check_query(g, clocks, v, t, "direct_affect_escape");
  std::vector<int> dist = distances_from(st.hop_graph(), v);
  TailSearch s{g,    st.hop_graph(), clocks, dist, t, n,
               st.mode() == HopMode::kTwoStep};
  Walk walk{v};
  std::vector<char> visited(g.vertex_count(), 0);
  visited[v] = 1;
  return s.forward(walk, visited, 0.0);
}

bool direct_affect_reach(const SpaceTimeGraph& st, const Graph& g, const ClockRealization& clocks,
                         VertexId v, double t, int n) {
  check_query(g, clocks, v, t, "direct_affect_reach");
  // The path must end at an event of v at time <= t.
  double tv = last_event_before(clocks, v, t, /*strict=*/false);
  if (tv == -kInf) return false;
  std::vector<int> dist = distances_from(st.hop_graph(), v);
  TailSearch s{g,    st.hop_graph(), clocks, dist, t, n,
               st.mode() == HopMode::kTwoStep};
  Walk walk{v};
  std::vector<char> visited(g.vertex_count(), 0);
  visited[v] = 1;
  return s.reverse(walk, visited, tv);
}

std::vector<TailEstimate> direct_affect_tail(const Graph& g, std::span<const double> rates,
                                             VertexId v, double delta, int n_min, int n_max,
                                             int replicas, std::uint64_t seed, HopMode mode) {
  if (!(delta > 0.0)) throw std::invalid_argument("direct_affect_tail: delta must be positive");
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("direct_affect_tail: bad n range");
  SpaceTimeGraph st(g, mode);

  int n_count = n_max - n_min + 1;
  std::vector<std::uint8_t> fwd_hits(static_cast<std::size_t>(replicas) * n_count, 0);
  std::vector<std::uint8_t> rev_hits(static_cast<std::size_t>(replicas) * n_count, 0);

  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    std::uint64_t replica_seed = rng::Stream(seed, rng::Lane::kScratch, r).bits(0);
    ClockRealization clocks = sample_clocks(g, rates, delta * n_max, replica_seed);
    for (int n = n_min; n <= n_max; ++n) {
      std::size_t slot = r * n_count + (n - n_min);
      fwd_hits[slot] = direct_affect_escape(st, g, clocks, v, delta * n, n) ? 1 : 0;
      rev_hits[slot] = direct_affect_reach(st, g, clocks, v, delta * n, n) ? 1 : 0;
    }
  });

  std::vector<TailEstimate> out;
  for (int n = n_min; n <= n_max; ++n) {
    TailEstimate e;
    e.n = n;
    e.horizon = delta * n;
    e.replicas = replicas;
    std::size_t fwd = 0, rev = 0;
    for (int r = 0; r < replicas; ++r) {
      fwd += fwd_hits[static_cast<std::size_t>(r) * n_count + (n - n_min)];
      rev += rev_hits[static_cast<std::size_t>(r) * n_count + (n - n_min)];
    }
    e.forward_freq = static_cast<double>(fwd) / replicas;
    e.reverse_freq = static_cast<double>(rev) / replicas;
    out.push_back(e);
  }
  return out;
}

}  // namespace particleforge
