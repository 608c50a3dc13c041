#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "particleforge/clocks.hpp"
#include "particleforge/graph.hpp"

namespace particleforge {

/// Hop reach of the space-time dependence edges: a point of u can reach any
/// strictly later event of a vertex in N_u^+ (general systems) or N_u
/// (self-updating systems).
enum class HopMode { kTwoStep, kOneStep };

/// Precomputed hop structure shared by the reachability queries. Holds the
/// hop graph (g or g+); self-hops (u to a later event of u) are implicit.
class SpaceTimeGraph {
 public:
  SpaceTimeGraph(const Graph& g, HopMode mode);

  const Graph& hop_graph() const { return hops_; }
  HopMode mode() const { return mode_; }

 private:
  Graph hops_;
  HopMode mode_;
};

/// E_t(w,v): a directed space-time path from (w,0) to an event of v at time
/// <= t. E_t(v,v) holds by the empty path.
bool affects(const SpaceTimeGraph& st, const ClockRealization& clocks, VertexId w, VertexId v,
             double t);
bool affects(const Graph& g, const ClockRealization& clocks, VertexId w, VertexId v, double t,
             HopMode mode);

/// C_{v,t}: all w that affect some z in N_v^+ (resp. N_v) by time t. Contains
/// the hop neighborhood of v via the reflexive convention. Sorted.
std::vector<VertexId> cluster(const SpaceTimeGraph& st, const Graph& g,
                              const ClockRealization& clocks, VertexId v, double t);
std::vector<VertexId> cluster(const Graph& g, const ClockRealization& clocks, VertexId v, double t,
                              HopMode mode);

/// Generation of each clock event: length of the longest directed path from
/// the time-0 layer. gen[v][i] corresponds to events[v][i]; the (v,0) layer
/// has generation 0 implicitly.
struct GenerationPartition {
  std::vector<std::vector<int>> gen;
};

GenerationPartition generations(const SpaceTimeGraph& st, const ClockRealization& clocks);
GenerationPartition generations(const Graph& g, const ClockRealization& clocks, HopMode mode);

/// Whether some vertex at hop-graph distance >= n from v is directly
/// affected by v within time t: a directed path through strictly increasing
/// event times whose vertex sequence is a SAW in the hop graph and, in
/// two-step mode, additionally passes is_remnant_saw.
bool direct_affect_escape(const SpaceTimeGraph& st, const Graph& g, const ClockRealization& clocks,
                          VertexId v, double t, int n);

/// Reverse direction: some vertex at distance >= n directly affects v within
/// time t.
bool direct_affect_reach(const SpaceTimeGraph& st, const Graph& g, const ClockRealization& clocks,
                         VertexId v, double t, int n);

struct TailEstimate {
  int n = 0;
  double horizon = 0.0;       // delta * n
  double forward_freq = 0.0;  // v directly affects some w with dist >= n
  double reverse_freq = 0.0;  // some such w directly affects v
  int replicas = 0;
};

/// Monte-Carlo tail frequencies over fresh clock realizations, one estimate
/// per n in [n_min, n_max], horizon delta*n.
std::vector<TailEstimate> direct_affect_tail(const Graph& g, std::span<const double> rates,
                                             VertexId v, double delta, int n_min, int n_max,
                                             int replicas, std::uint64_t seed, HopMode mode);

}  // namespace particleforge
