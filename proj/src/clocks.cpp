#include "particleforge/clocks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "particleforge/rng.hpp"

namespace particleforge {

std::size_t ClockRealization::total_events() const {
  std::size_t n = 0;
  for (const auto& ev : events) n += ev.size();
  return n;
}

std::string ClockRealization::csv_header() { return "vertex,index,time,mark"; }

std::string ClockRealization::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (VertexId v = 0; v < events.size(); ++v) {
    for (std::size_t i = 0; i < events[v].size(); ++i) {
      os << v << ',' << i << ',' << events[v][i].time << ',' << events[v][i].mark << '\n';
    }
  }
  return os.str();
}

ClockRealization sample_clocks(const Graph& g, std::span<const double> rates, double horizon,
                               std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_clocks: horizon must be positive");
  if (rates.size() != g.vertex_count()) {
    throw std::invalid_argument("sample_clocks: rate vector size mismatch");
  }
  ClockRealization ck;
  ck.horizon = horizon;
  ck.events.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    double c = rates[v];
    if (c < 0.0 || !std::isfinite(c)) {
      throw std::invalid_argument("sample_clocks: negative or non-finite rate");
    }
    if (c == 0.0) continue;
    rng::Sequence gaps(seed, rng::Lane::kClock, v);
    rng::Stream marks(seed, rng::Lane::kMark, v);
    double t = 0.0;
    for (std::uint64_t i = 0;; ++i) {
      t += gaps.next_exponential(c);
      if (t > horizon) break;
      ck.events[v].push_back({t, marks.uniform(i)});
    }
  }
  return ck;
}

}  // namespace particleforge
