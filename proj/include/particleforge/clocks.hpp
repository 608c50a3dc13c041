#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "particleforge/graph.hpp"

namespace particleforge {

struct ClockEvent {
  double time = 0.0;
  double mark = 0.0;  // uniform in [0,1)
};

/// Per-vertex marked Poisson event times on (0, horizon]. Times are strictly
/// increasing per vertex. Streams are keyed by (seed, vertex) only, so a
/// vertex keeps its clock when the active window around it changes.
struct ClockRealization {
  double horizon = 0.0;
  std::vector<std::vector<ClockEvent>> events;  // indexed by vertex id

  std::size_t total_events() const;

  /// CSV rows (vertex,index,time,mark) with 17 significant digits.
  static std::string csv_header();
  std::string to_csv() const;
};

/// rates[v] is the Poisson intensity at v; rate 0 means no events.
ClockRealization sample_clocks(const Graph& g, std::span<const double> rates, double horizon,
                               std::uint64_t seed);

}  // namespace particleforge
