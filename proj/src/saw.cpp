#include "particleforge/saw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace particleforge {

namespace {

constexpr std::size_t kWalkCountGuard = 20'000'000;

bool contains(const Walk& walk, VertexId v) {
  return std::find(walk.begin(), walk.end(), v) != walk.end();
}

void check_walk_is_path(const Graph& host, const Walk& walk, const char* who) {
  if (walk.empty()) throw std::invalid_argument(std::string(who) + ": empty walk");
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (!host.has_vertex(walk[i]) || !host.has_vertex(walk[i + 1]) ||
        !host.has_edge(walk[i], walk[i + 1])) {
      throw std::invalid_argument(std::string(who) + ": not a path in the host graph");
    }
  }
  if (!host.has_vertex(walk[0])) {
    throw std::invalid_argument(std::string(who) + ": unknown vertex");
  }
}

bool is_saw(const Walk& walk) {
  Walk sorted = walk;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/// Sorted common g-neighbors of u and w.
std::vector<VertexId> common_neighbors(const Graph& g, VertexId u, VertexId w) {
  std::vector<VertexId> out;
  auto a = g.neighbors(u);
  auto b = g.neighbors(w);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Backtracking search for distinct bridge representatives, one per gap.
bool assign_bridges(const std::vector<std::vector<VertexId>>& candidates, std::size_t gap,
                    std::vector<VertexId>& used) {
  if (gap == candidates.size()) return true;
  for (VertexId u : candidates[gap]) {
    if (std::find(used.begin(), used.end(), u) != used.end()) continue;
    used.push_back(u);
    if (assign_bridges(candidates, gap + 1, used)) return true;
    used.pop_back();
  }
  return false;
}

void enumerate_saws_impl(const Graph& g, Walk& walk, std::vector<char>& visited, int n,
                         std::vector<Walk>& out) {
  if (static_cast<int>(walk.size()) == n + 1) {
    if (out.size() >= kWalkCountGuard) {
      throw std::length_error("enumerate_saws: walk count guard exceeded");
    }
    out.push_back(walk);
    return;
  }
  for (VertexId w : g.neighbors(walk.back())) {
    if (visited[w]) continue;
    visited[w] = 1;
    walk.push_back(w);
    enumerate_saws_impl(g, walk, visited, n, out);
    walk.pop_back();
    visited[w] = 0;
  }
}

void check_cap(int n, const char* who) {
  if (n > saw_length_cap()) {
    throw std::invalid_argument(std::string(who) + ": n=" + std::to_string(n) +
                                " exceeds enumeration cap " + std::to_string(saw_length_cap()) +
                                " (set PARTICLE_FORGE_CAP_N to raise)");
  }
}

}  // namespace

int saw_length_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("PARTICLE_FORGE_CAP_N")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 12;
  }();
  return cap;
}

std::vector<Walk> enumerate_saws(const Graph& g, VertexId v, int n) {
  if (!g.has_vertex(v)) throw std::invalid_argument("enumerate_saws: unknown vertex");
  if (n < 1) throw std::invalid_argument("enumerate_saws: n must be >= 1");
  check_cap(n, "enumerate_saws");
  std::vector<Walk> out;
  std::vector<char> visited(g.vertex_count(), 0);
  Walk walk{v};
  visited[v] = 1;
  enumerate_saws_impl(g, walk, visited, n, out);
  return out;
}

bool is_remnant_saw(const Graph& g, const Graph& g_plus, const Walk& walk) {
  check_walk_is_path(g_plus, walk, "is_remnant_saw");
  if (!is_saw(walk)) {
    throw std::invalid_argument("is_remnant_saw: walk is not a SAW in the 2-step graph");
  }
  std::vector<std::vector<VertexId>> candidates;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (g.has_edge(walk[i], walk[i + 1])) continue;
    std::vector<VertexId> cs;
    for (VertexId u : common_neighbors(g, walk[i], walk[i + 1])) {
      if (!contains(walk, u)) cs.push_back(u);
    }
    if (cs.empty()) return false;
    candidates.push_back(std::move(cs));
  }
  // Smallest candidate sets first keeps the backtracking shallow.
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<VertexId> used;
  return assign_bridges(candidates, 0, used);
}

bool is_remnant_saw(const Graph& g, const Walk& walk) {
  return is_remnant_saw(g, two_step_graph(g), walk);
}

namespace {

void enumerate_remnant_impl(const Graph& g, const Graph& g_plus, Walk& walk,
                            std::vector<char>& visited, int n, std::vector<Walk>& out) {
  // Prefixes of remnant SAWs are remnant SAWs, so failing prefixes prune
  // their whole subtree.
  if (!is_remnant_saw(g, g_plus, walk)) return;
  if (static_cast<int>(walk.size()) == n + 1) {
    if (out.size() >= kWalkCountGuard) {
      throw std::length_error("enumerate_remnant_saws: walk count guard exceeded");
    }
    out.push_back(walk);
    return;
  }
  for (VertexId w : g_plus.neighbors(walk.back())) {
    if (visited[w]) continue;
    visited[w] = 1;
    walk.push_back(w);
    enumerate_remnant_impl(g, g_plus, walk, visited, n, out);
    walk.pop_back();
    visited[w] = 0;
  }
}

}  // namespace

std::vector<Walk> enumerate_remnant_saws(const Graph& g, VertexId v, int n) {
  if (!g.has_vertex(v)) throw std::invalid_argument("enumerate_remnant_saws: unknown vertex");
  if (n < 1) throw std::invalid_argument("enumerate_remnant_saws: n must be >= 1");
  check_cap(n, "enumerate_remnant_saws");
  Graph g_plus = two_step_graph(g);
  std::vector<Walk> out;
  std::vector<char> visited(g.vertex_count(), 0);
  Walk walk{v};
  visited[v] = 1;
  enumerate_remnant_impl(g, g_plus, walk, visited, n, out);
  return out;
}

Walk reduce_path_to_remnant_saw(const Graph& g, const Graph& g_plus, const Walk& path) {
  check_walk_is_path(g_plus, path, "reduce_path_to_remnant_saw");

  // gamma' of the induction: a SAW in g+ ending at the processed vertex.
  Walk reduced{path[0]};
  // Witness SAW in g obtained by bridging; deleting flagged bridge vertices
  // from it recovers `reduced` exactly.
  Walk witness{path[0]};
  std::vector<char> inserted{0};
  // Position of each reduced element inside the witness.
  std::vector<std::size_t> wit_pos{0};

  auto witness_index_of = [&](VertexId u) -> std::ptrdiff_t {
    auto it = std::find(witness.begin(), witness.end(), u);
    return it == witness.end() ? -1 : it - witness.begin();
  };

  for (std::size_t step = 1; step < path.size(); ++step) {
    VertexId w = path[step];
    VertexId last = reduced.back();
    if (w == last) continue;  // cannot happen on a simple host graph, but harmless

    // Repeat vertex: truncate both walks at its first appearance.
    auto rit = std::find(reduced.begin(), reduced.end(), w);
    if (rit != reduced.end()) {
      std::size_t i = rit - reduced.begin();
      reduced.resize(i + 1);
      witness.resize(wit_pos[i] + 1);
      inserted.resize(wit_pos[i] + 1);
      wit_pos.resize(i + 1);
      continue;
    }

    // w already serves as a bridge in the witness: cut the witness right
    // after it and promote it to a real endpoint.
    if (std::ptrdiff_t j = witness_index_of(w); j >= 0) {
      // w is not in `reduced`, so it must be a bridge.
      std::size_t keep = 0;
      while (keep + 1 < reduced.size() && wit_pos[keep + 1] < static_cast<std::size_t>(j)) ++keep;
      reduced.resize(keep + 1);
      wit_pos.resize(keep + 1);
      witness.resize(j + 1);
      inserted.resize(j + 1);
      inserted[j] = 0;
      reduced.push_back(w);
      wit_pos.push_back(j);
      continue;
    }

    if (g.has_edge(last, w)) {
      reduced.push_back(w);
      witness.push_back(w);
      inserted.push_back(0);
      wit_pos.push_back(witness.size() - 1);
      continue;
    }

    // Bridged hop. Prefer a bridge vertex not yet used by the witness.
    auto cands = common_neighbors(g, last, w);
    if (cands.empty()) {
      throw std::invalid_argument("reduce_path_to_remnant_saw: not a path in the 2-step graph");
    }
    VertexId bridge = cands.front();
    bool fresh = false;
    for (VertexId u : cands) {
      if (witness_index_of(u) < 0) {
        bridge = u;
        fresh = true;
        break;
      }
    }
    if (fresh) {
      witness.push_back(bridge);
      inserted.push_back(1);
      witness.push_back(w);
      inserted.push_back(0);
      reduced.push_back(w);
      wit_pos.push_back(witness.size() - 1);
      continue;
    }

    // Every candidate bridge already occurs in the witness: cut the witness
    // right after the chosen one and continue from there.
    std::size_t j = static_cast<std::size_t>(witness_index_of(bridge));
    std::size_t keep = 0;
    while (keep + 1 < reduced.size() && wit_pos[keep + 1] <= j) ++keep;
    reduced.resize(keep + 1);
    wit_pos.resize(keep + 1);
    witness.resize(j + 1);
    inserted.resize(j + 1);
    witness.push_back(w);
    inserted.push_back(0);
    reduced.push_back(w);
    wit_pos.push_back(witness.size() - 1);
  }

  return reduced;
}

Walk reduce_path_to_remnant_saw(const Graph& g, const Walk& path) {
  return reduce_path_to_remnant_saw(g, two_step_graph(g), path);
}

namespace {

struct TrailAccumulator {
  std::vector<double>& sums;          // indexed by n-2
  std::vector<double>* shifted_sums;  // optional, same indexing
  int n_max;
};

/// DFS over SAWs accumulating the interior-rate products per length.
/// `remnant_mode` restricts to remnant SAWs of g inside host = g+.
void trail_dfs(const Graph& host, const Graph* base_for_remnant, std::span<const double> rates,
               Walk& walk, std::vector<char>& visited, double interior_product,
               TrailAccumulator& acc) {
  int depth = static_cast<int>(walk.size()) - 1;
  if (base_for_remnant && depth >= 1 && !is_remnant_saw(*base_for_remnant, host, walk)) return;
  if (depth >= 2) {
    acc.sums[depth - 2] += interior_product;
  }
  if (acc.shifted_sums && depth >= 2) {
    (*acc.shifted_sums)[depth - 2] += interior_product * rates[walk.back()];
  }
  if (depth == acc.n_max) return;
  double next_interior = depth == 0 ? 1.0 : interior_product * rates[walk.back()];
  for (VertexId w : host.neighbors(walk.back())) {
    if (visited[w]) continue;
    visited[w] = 1;
    walk.push_back(w);
    trail_dfs(host, base_for_remnant, rates, walk, visited, next_interior, acc);
    walk.pop_back();
    visited[w] = 0;
  }
}

}  // namespace

TrailTable trail_table(const Graph& g, const Graph& g_plus, std::span<const double> rates,
                       VertexId v, int n_max) {
  if (!g.has_vertex(v)) throw std::invalid_argument("trail_table: unknown vertex");
  if (n_max < 2) throw std::invalid_argument("trail_table: n_max must be >= 2");
  check_cap(n_max, "trail_table");
  if (rates.size() != g.vertex_count()) {
    throw std::invalid_argument("trail_table: rate vector size mismatch");
  }
  for (double c : rates) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("trail_table: rates must be finite and non-negative");
    }
  }

  TrailTable t;
  t.vertex = v;
  t.n_max = n_max;
  t.raw_simple.assign(n_max - 1, 0.0);
  t.raw_double.assign(n_max - 1, 0.0);
  t.raw_shifted.assign(n_max - 1, 0.0);

  std::vector<char> visited(g.vertex_count(), 0);
  Walk walk{v};
  visited[v] = 1;
  {
    TrailAccumulator acc{t.raw_simple, nullptr, n_max};
    trail_dfs(g, nullptr, rates, walk, visited, 1.0, acc);
  }
  {
    TrailAccumulator acc{t.raw_double, &t.raw_shifted, n_max};
    trail_dfs(g_plus, &g, rates, walk, visited, 1.0, acc);
  }

  t.theta_simple.resize(n_max - 1);
  t.theta_double.resize(n_max - 1);
  for (int n = 2; n <= n_max; ++n) {
    double e = 1.0 / (n - 1);
    t.theta_simple[n - 2] = std::pow(t.raw_simple[n - 2], e);
    t.theta_double[n - 2] = std::pow(t.raw_double[n - 2], e);
  }
  return t;
}

TrailTable trail_table(const Graph& g, std::span<const double> rates, VertexId v, int n_max) {
  return trail_table(g, two_step_graph(g), rates, v, n_max);
}

double TrailTable::growth_diagnostic() const {
  double worst = 0.0;
  int count = 0;
  for (int n = n_max; n >= 3 && count < 3; --n) {
    double hi = theta_double_at(n);
    double lo = theta_double_at(n - 1);
    if (lo > 0.0) {
      worst = std::max(worst, hi / lo);
      ++count;
    }
  }
  return worst;
}

std::string TrailTable::csv_header() {
  return "vertex,n,raw_sum_simple,theta_simple,raw_sum_double,theta_double";
}

std::string TrailTable::to_csv_rows() const {
  std::ostringstream os;
  os.precision(17);
  for (int n = 2; n <= n_max; ++n) {
    os << vertex << ',' << n << ',' << raw_simple_at(n) << ',' << theta_simple_at(n) << ','
       << raw_double_at(n) << ',' << theta_double_at(n) << '\n';
  }
  return os.str();
}

std::vector<double> connective_constant_estimate(const Graph& g, VertexId v, int n_max) {
  if (!g.has_vertex(v)) {
    throw std::invalid_argument("connective_constant_estimate: unknown vertex");
  }
  if (n_max < 1) throw std::invalid_argument("connective_constant_estimate: n_max must be >= 1");
  check_cap(n_max, "connective_constant_estimate");

  std::vector<std::size_t> counts(n_max + 1, 0);
  std::vector<char> visited(g.vertex_count(), 0);
  Walk walk{v};
  visited[v] = 1;

  auto dfs = [&](auto&& self, VertexId u, int depth) -> void {
    if (depth >= 1) ++counts[depth];
    if (depth == n_max) return;
    for (VertexId w : g.neighbors(u)) {
      if (visited[w]) continue;
      visited[w] = 1;
      self(self, w, depth + 1);
      visited[w] = 0;
    }
  };
  dfs(dfs, v, 0);

  std::vector<double> out(n_max);
  for (int n = 1; n <= n_max; ++n) {
    out[n - 1] = std::pow(static_cast<double>(counts[n]), 1.0 / n);
  }
  return out;
}

}  // namespace particleforge
