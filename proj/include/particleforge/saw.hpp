#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "particleforge/graph.hpp"

namespace particleforge {

/// Walk = ordered vertex list; first entry is the start vertex.
using Walk = std::vector<VertexId>;

/// Default cap on SAW length; enumeration cost is exponential in n.
/// Overridable via the PARTICLE_FORGE_CAP_N environment variable.
int saw_length_cap();

/// All self-avoiding walks of exactly n steps from v, lexicographic order.
std::vector<Walk> enumerate_saws(const Graph& g, VertexId v, int n);

/// Whether `walk` (a SAW in two_step_graph(g)) can be completed to a SAW in
/// g by bridging every g-non-adjacent consecutive pair with a common
/// neighbor, all bridges distinct from each other and from the walk.
/// Decided by exact backtracking over per-gap candidate sets.
bool is_remnant_saw(const Graph& g, const Walk& walk);

/// Convenience overload when the caller already has g+.
bool is_remnant_saw(const Graph& g, const Graph& g_plus, const Walk& walk);

/// All n-step SAWs in g+ from v that pass is_remnant_saw, lexicographic.
std::vector<Walk> enumerate_remnant_saws(const Graph& g, VertexId v, int n);

/// Reduces an arbitrary path in g+ (repeats allowed) to a subsequence with
/// the same endpoints that is a SAW in g+ and passes is_remnant_saw.
Walk reduce_path_to_remnant_saw(const Graph& g, const Walk& path);
Walk reduce_path_to_remnant_saw(const Graph& g, const Graph& g_plus, const Walk& path);

/// Per-vertex table of n-step jump rate trails, n = 2..n_max.
/// raw sums are the inner SAW-weighted sums before the 1/(n-1) root;
/// theta entries are the rooted values. An empty sum yields trail 0.
struct TrailTable {
  VertexId vertex = 0;
  int n_max = 0;
  std::vector<double> raw_simple;     // over SAW_{g,n}(v),   product of interior rates
  std::vector<double> raw_double;     // over SAW*_{g,n}(v),  product of interior rates
  std::vector<double> theta_simple;   // raw_simple^(1/(n-1))
  std::vector<double> theta_double;   // raw_double^(1/(n-1))
  std::vector<double> raw_shifted;    // over SAW*_{g,n}(v),  product including the end vertex

  double raw_simple_at(int n) const { return raw_simple.at(n - 2); }
  double raw_double_at(int n) const { return raw_double.at(n - 2); }
  double theta_simple_at(int n) const { return theta_simple.at(n - 2); }
  double theta_double_at(int n) const { return theta_double.at(n - 2); }
  double raw_shifted_at(int n) const { return raw_shifted.at(n - 2); }

  /// Geometric-ratio diagnostic: max over the last (up to) three successive
  /// ratios of raw_double^(1/(n-1)). Finite-n evidence for the limsup trail.
  double growth_diagnostic() const;

  static std::string csv_header();
  std::string to_csv_rows() const;
};

TrailTable trail_table(const Graph& g, std::span<const double> rates, VertexId v, int n_max);
TrailTable trail_table(const Graph& g, const Graph& g_plus, std::span<const double> rates,
                       VertexId v, int n_max);

/// |SAW_{g,n}(v)|^(1/n) for n = 1..n_max.
std::vector<double> connective_constant_estimate(const Graph& g, VertexId v, int n_max);

}  // namespace particleforge
