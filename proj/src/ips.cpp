#include "particleforge/ips.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "particleforge/construction.hpp"

namespace particleforge {

namespace {

struct PendingEvent {
  double time;
  VertexId vertex;
  double mark;
  int generation = 0;
};

void gather_local(const Configuration& x, std::span<const VertexId> nbhd,
                  std::vector<LocalState>& out) {
  out.resize(nbhd.size());
  for (std::size_t i = 0; i < nbhd.size(); ++i) out[i] = x[nbhd[i]];
}

void check_run_inputs(const Graph& g, const Window& window, const Configuration& x0,
                      const ClockRealization& clocks, double horizon) {
  if (x0.size() != g.vertex_count()) {
    throw std::invalid_argument("run: configuration size does not match graph");
  }
  if (clocks.events.size() != g.vertex_count()) {
    throw std::invalid_argument("run: clocks do not match graph");
  }
  if (horizon > clocks.horizon) {
    throw std::invalid_argument("run: horizon exceeds the sampled clock horizon");
  }
  for (VertexId v : window.core) {
    if (!g.has_vertex(v)) throw std::invalid_argument("run: core vertex outside graph");
    for (VertexId w : neighborhood(g, v)) {
      if (!window.in_ambient(w)) {
        throw std::invalid_argument("run: event vertex " + std::to_string(v) +
                                    " lacks its full neighborhood inside the ambient set");
      }
    }
  }
}

Trajectory replay(const Graph& g, const JumpKernel& kernel, const Configuration& x0,
                  std::vector<PendingEvent> order, double horizon,
                  std::size_t tie_count) {
  Trajectory traj;
  traj.initial = x0;
  traj.horizon = horizon;
  traj.simultaneous_time_ties = tie_count;

  Configuration x = x0;
  std::vector<LocalState> local;
  for (const PendingEvent& ev : order) {
    auto nbhd = neighborhood(g, ev.vertex);
    gather_local(x, nbhd, local);
    rng::Sequence draws = update_stream_for_mark(ev.mark);
    std::vector<LocalState> next = mu_step(g, kernel, ev.vertex, local, draws);
    if (next != local) {
      TrajectoryEvent te;
      te.time = ev.time;
      te.vertex = ev.vertex;
      te.nbhd = nbhd;
      te.before = local;
      te.after = next;
      traj.events.push_back(std::move(te));
      for (std::size_t i = 0; i < nbhd.size(); ++i) x[nbhd[i]] = next[i];
    }
  }
  // Replays may process events in generation order; the recorded trajectory
  // is always chronological.
  std::sort(traj.events.begin(), traj.events.end(),
            [](const TrajectoryEvent& a, const TrajectoryEvent& b) {
              return a.time != b.time ? a.time < b.time : a.vertex < b.vertex;
            });
  return traj;
}

std::vector<PendingEvent> core_events(const Window& window, const ClockRealization& clocks,
                                      double horizon) {
  std::vector<PendingEvent> out;
  for (VertexId v : window.core) {
    for (const ClockEvent& e : clocks.events[v]) {
      if (e.time <= horizon) out.push_back({e.time, v, e.mark});
    }
  }
  return out;
}

std::size_t count_time_ties(std::vector<PendingEvent>& order) {
  std::size_t ties = 0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i].time == order[i - 1].time) ++ties;
  }
  return ties;
}

}  // namespace

std::vector<double> rate_profile(const Graph& g, const JumpKernel& kernel) {
  std::vector<double> c(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) c[v] = kernel.rate_bound(g, v);
  return c;
}

rng::Sequence update_stream_for_mark(double mark) {
  return rng::Sequence(std::bit_cast<std::uint64_t>(mark), rng::Lane::kUpdate);
}

std::vector<LocalState> mu_step(const Graph& g, const JumpKernel& kernel, VertexId v,
                                std::span<const LocalState> local, rng::Sequence& update_draws) {
  double c = kernel.rate_bound(g, v);
  if (!(c > 0.0)) {
    throw std::invalid_argument("mu_step: rate bound at vertex " + std::to_string(v) +
                                " is not positive");
  }
  double alpha = kernel.total_rate(g, v, local);
  if (alpha < 0.0 || !std::isfinite(alpha)) {
    throw KernelContractViolation(kernel.name() + ": negative or non-finite jump rate");
  }
  if (alpha > c * (1.0 + 1e-12)) {
    throw KernelContractViolation(kernel.name() + ": jump rate " + std::to_string(alpha) +
                                  " exceeds declared bound " + std::to_string(c) + " at vertex " +
                                  std::to_string(v));
  }

  double u0 = update_draws.next_uniform();
  std::vector<LocalState> out(local.begin(), local.end());
  if (u0 * c >= alpha) return out;  // thinned: keep the state

  auto targets = kernel.targets(g, v, local);
  double total = 0.0;
  for (const auto& t : targets) {
    if (t.rate < 0.0 || t.local.size() != local.size()) {
      throw KernelContractViolation(kernel.name() + ": malformed jump target");
    }
    total += t.rate;
  }
  if (std::abs(total - alpha) > 1e-9 * std::max(1.0, alpha)) {
    throw KernelContractViolation(kernel.name() + ": target rates sum to " +
                                  std::to_string(total) + " but total_rate is " +
                                  std::to_string(alpha));
  }
  double r = update_draws.next_uniform() * total;
  double cum = 0.0;
  for (const auto& t : targets) {
    cum += t.rate;
    if (r < cum) return t.local;
  }
  return targets.back().local;
}

Trajectory run(const Graph& g, const Window& window, const JumpKernel& kernel,
               const Configuration& x0, const ClockRealization& clocks, double horizon) {
  check_run_inputs(g, window, x0, clocks, horizon);
  std::vector<PendingEvent> order = core_events(window, clocks, horizon);
  std::sort(order.begin(), order.end(), [](const PendingEvent& a, const PendingEvent& b) {
    return a.time != b.time ? a.time < b.time : a.vertex < b.vertex;
  });
  std::size_t ties = count_time_ties(order);
  return replay(g, kernel, x0, std::move(order), horizon, ties);
}

Trajectory run_generation_ordered(const Graph& g, const Window& window, const JumpKernel& kernel,
                                  const Configuration& x0, const ClockRealization& clocks,
                                  double horizon) {
  check_run_inputs(g, window, x0, clocks, horizon);

  // Generations are computed on the truncated space-time set: only core
  // events up to the horizon exist for the truncated process.
  ClockRealization truncated;
  truncated.horizon = horizon;
  truncated.events.resize(g.vertex_count());
  for (VertexId v : window.core) {
    for (const ClockEvent& e : clocks.events[v]) {
      if (e.time <= horizon) truncated.events[v].push_back(e);
    }
  }
  HopMode mode = kernel.self_updating() ? HopMode::kOneStep : HopMode::kTwoStep;
  GenerationPartition part = generations(g, truncated, mode);

  std::vector<PendingEvent> order;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t i = 0; i < truncated.events[v].size(); ++i) {
      order.push_back(
          {truncated.events[v][i].time, v, truncated.events[v][i].mark, part.gen[v][i]});
    }
  }
  std::sort(order.begin(), order.end(), [](const PendingEvent& a, const PendingEvent& b) {
    if (a.generation != b.generation) return a.generation < b.generation;
    return a.time != b.time ? a.time < b.time : a.vertex < b.vertex;
  });
  // Tie accounting matches the chronological sweep.
  std::vector<PendingEvent> chrono = order;
  std::sort(chrono.begin(), chrono.end(), [](const PendingEvent& a, const PendingEvent& b) {
    return a.time != b.time ? a.time < b.time : a.vertex < b.vertex;
  });
  std::size_t ties = count_time_ties(chrono);
  return replay(g, kernel, x0, std::move(order), horizon, ties);
}

Configuration Trajectory::state_at(double t) const {
  Configuration x = initial;
  for (const TrajectoryEvent& e : events) {
    if (e.time > t) break;
    for (std::size_t i = 0; i < e.nbhd.size(); ++i) x[e.nbhd[i]] = e.after[i];
  }
  return x;
}

std::string Trajectory::to_jsonl() const {
  nlohmann::json header;
  header["horizon"] = horizon;
  nlohmann::json init = nlohmann::json::object();
  for (VertexId v = 0; v < initial.size(); ++v) {
    init[std::to_string(v)] = {initial[v].value, initial[v].aux};
  }
  header["initial"] = std::move(init);

  std::ostringstream os;
  os << header.dump() << '\n';
  for (const TrajectoryEvent& e : events) {
    nlohmann::json line;
    line["t"] = e.time;
    line["v"] = e.vertex;
    nlohmann::json patch = nlohmann::json::object();
    for (std::size_t i = 0; i < e.nbhd.size(); ++i) {
      if (!(e.before[i] == e.after[i])) {
        patch[std::to_string(e.nbhd[i])] = {e.after[i].value, e.after[i].aux};
      }
    }
    line["patch"] = std::move(patch);
    os << line.dump() << '\n';
  }
  return os.str();
}

double apply_generator(const Graph& g, const Window& window, const JumpKernel& kernel,
                       const CylinderObservable& f, const Configuration& x) {
  if (x.size() != g.vertex_count()) {
    throw std::invalid_argument("apply_generator: configuration size mismatch");
  }
  std::vector<VertexId> support;
  for (VertexId a : f.base) {
    if (!g.has_vertex(a)) throw std::invalid_argument("apply_generator: observable base vertex");
    auto na = neighborhood(g, a);
    support.insert(support.end(), na.begin(), na.end());
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  double fx = f.eval(x);
  double sum = 0.0;
  Configuration y = x;
  std::vector<LocalState> local;
  for (VertexId v : support) {
    if (!window.in_core(v)) continue;
    auto nbhd = neighborhood(g, v);
    gather_local(x, nbhd, local);
    for (const auto& target : kernel.targets(g, v, local)) {
      for (std::size_t i = 0; i < nbhd.size(); ++i) y[nbhd[i]] = target.local[i];
      sum += target.rate * (f.eval(y) - fx);
      for (std::size_t i = 0; i < nbhd.size(); ++i) y[nbhd[i]] = x[nbhd[i]];
    }
  }
  return sum;
}

}  // namespace particleforge
