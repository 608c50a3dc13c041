#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "particleforge/clocks.hpp"
#include "particleforge/graph.hpp"
#include "particleforge/rng.hpp"

namespace particleforge {

/// Per-site state. `value` carries the model state (spin, grain count, mass,
/// white-ball count); `aux` is only used by models with two counters per
/// site (black-ball count for urns). Integer-valued states stay exact in a
/// double well past any reachable count.
struct LocalState {
  double value = 0.0;
  double aux = 0.0;
  bool operator==(const LocalState&) const = default;
};

/// Global state, indexed by vertex id of the underlying graph. Entries
/// outside a window's ambient set are never read or written by a truncated
/// run.
using Configuration = std::vector<LocalState>;

/// Signals a kernel whose realized jump rate exceeded its declared bound, or
/// a malformed target enumeration. The acceptance battery requires that this
/// never fires.
class KernelContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A jump rate kernel: total jump rate and finitely many jump targets as a
/// function of the state restricted to N_v. Targets are aligned with the
/// sorted neighborhood (v included).
class JumpKernel {
 public:
  virtual ~JumpKernel() = default;

  struct Target {
    std::vector<LocalState> local;  // new states on N_v, sorted order
    double rate = 0.0;
  };

  virtual std::string name() const = 0;
  virtual bool self_updating() const = 0;

  /// Sitewise rate bound c_v; the Poisson clock intensity at v.
  virtual double rate_bound(const Graph& g, VertexId v) const = 0;

  /// Total jump rate at v for the given local state (alpha*_v).
  virtual double total_rate(const Graph& g, VertexId v,
                            std::span<const LocalState> local) const = 0;

  /// All jump targets with positive rate; rates sum to total_rate.
  virtual std::vector<Target> targets(const Graph& g, VertexId v,
                                      std::span<const LocalState> local) const = 0;
};

/// Sitewise rate bounds for all vertices.
std::vector<double> rate_profile(const Graph& g, const JumpKernel& kernel);

/// One thinned update at v: with probability alpha*_v(x)/c_v jump to a
/// target chosen proportionally to its rate, otherwise keep the state.
/// All randomness comes from `update_draws`, a substream derived from the
/// event's mark, so identical marks give identical outcomes across windows.
std::vector<LocalState> mu_step(const Graph& g, const JumpKernel& kernel, VertexId v,
                                std::span<const LocalState> local, rng::Sequence& update_draws);

/// Derives the per-event update stream from a clock mark.
rng::Sequence update_stream_for_mark(double mark);

struct TrajectoryEvent {
  double time = 0.0;
  VertexId vertex = 0;
  std::vector<VertexId> nbhd;         // sorted N_v of the jumping vertex
  std::vector<LocalState> before;     // aligned with nbhd
  std::vector<LocalState> after;      // aligned with nbhd
};

struct Trajectory {
  Configuration initial;
  std::vector<TrajectoryEvent> events;  // strictly increasing times, state-changing only
  double horizon = 0.0;
  std::size_t simultaneous_time_ties = 0;  // diagnostic; ties are broken by vertex id

  Configuration state_at(double t) const;

  /// JSON-lines export: a header line with the initial configuration, then
  /// one line {"t":..,"v":..,"patch":{vertex:[value,aux],..}} per event.
  std::string to_jsonl() const;
};

/// Event-driven construction of the window-truncated process: processes the
/// clock events of core vertices chronologically, each event updating N_v
/// through mu_step. Clocks outside the core are ignored; states outside the
/// ambient set never change.
Trajectory run(const Graph& g, const Window& window, const JumpKernel& kernel,
               const Configuration& x0, const ClockRealization& clocks, double horizon);

/// Same trajectory, but replayed along the generation partition instead of
/// chronologically (testing hook for the partition-order equivalence).
Trajectory run_generation_ordered(const Graph& g, const Window& window, const JumpKernel& kernel,
                                  const Configuration& x0, const ClockRealization& clocks,
                                  double horizon);

/// Bounded measurable observable depending on finitely many coordinates.
struct CylinderObservable {
  std::string label;
  std::vector<VertexId> base;
  std::function<double(const Configuration&)> eval;
};

/// Exact generator application: sum over v in N_base intersected with the
/// window core of the rate-weighted increments over all jump targets.
double apply_generator(const Graph& g, const Window& window, const JumpKernel& kernel,
                       const CylinderObservable& f, const Configuration& x);

}  // namespace particleforge
