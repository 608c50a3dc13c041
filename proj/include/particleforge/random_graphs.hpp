#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "particleforge/graph.hpp"

namespace particleforge {

/// A vertex universe with stable identities: dense graph ids 0..n-1 paired
/// with coordinates and a window-independent stream key per vertex, so
/// growing the window reveals one consistent random realization.
struct PointSet {
  std::vector<std::vector<double>> points;  // coordinate per vertex id
  std::vector<std::uint64_t> keys;          // stable stream key per vertex id

  std::size_t size() const { return points.size(); }
  double distance(VertexId u, VertexId v) const;  // Euclidean
};

/// Z^d window [-radius, radius]^d; keys are zigzag-packed coordinates.
PointSet integer_lattice(int dim, int radius);

/// Integer combinations of the basis columns whose points fall inside the
/// centered box [-half_extent, half_extent]^d.
PointSet lattice_points(const std::vector<std::vector<double>>& basis, double half_extent);

/// Symmetric non-negative coupling field with its summability exponent.
struct CouplingField {
  std::function<double(const PointSet&, VertexId, VertexId)> j;
  double p = 1.5;   // uniform p-summability exponent, > 1
  double beta = 1.0;

  static CouplingField power_law(double exponent, double p, double beta);
};

/// Long-range percolation: each pair u<v independently joined with
/// probability 1 - exp(-beta * J(u,v)); the edge uniform is keyed by
/// (seed, key(u), key(v)), invariant under window growth.
Graph sample_lrp(const PointSet& pts, const CouplingField& field, std::uint64_t seed);

/// Single LRP edge indicator, identical to what sample_lrp would produce.
bool lrp_edge(const PointSet& pts, const CouplingField& field, std::uint64_t seed, VertexId u,
              VertexId v);

/// The uniform draw behind the (u,v) edge decision.
double lrp_edge_uniform(const PointSet& pts, std::uint64_t seed, VertexId u, VertexId v);

/// Grain-radius law with declared moment constant K: E[Z^n] <= K^n.
struct RadiusLaw {
  enum class Kind { kUniform, kConstant };
  Kind kind = Kind::kUniform;
  double param = 1.0;  // uniform upper end, or the constant value
  double moment_k = 1.0;

  static RadiusLaw uniform(double upper);      // K = upper
  static RadiusLaw constant(double value);     // K = max(value, 1)
  double sample(std::uint64_t seed, std::uint64_t key) const;

  /// Monte-Carlo check of E[Z^n] <= K^n for n <= 6 (3-sigma one-sided).
  bool validate_moments(std::uint64_t seed, int replicas = 200'000) const;
};

/// Geometric random graph: i.i.d. radii R_v ~ law keyed by (seed, key(v));
/// u ~ v iff dist(u,v) < min(R_u, R_v) strictly.
Graph sample_grg(const PointSet& pts, const RadiusLaw& law, std::uint64_t seed);

/// Radii drawn exactly as sample_grg draws them.
std::vector<double> grg_radii(const PointSet& pts, const RadiusLaw& law, std::uint64_t seed);

/// Finite-window sup_u sum_{v != u} J(u,v)^(1/p). Monotone in the window.
double p_sum(const PointSet& pts, const CouplingField& field);

/// Finite-window S(V;s) = sup_v sum_{w != v} dist(v,w)^{-s}.
double s_sum(const PointSet& pts, double s);

struct DeloneReport {
  bool uniformly_discrete = false;
  double min_pairwise_distance = 0.0;
  bool relatively_dense = false;
  double worst_probe_gap = 0.0;  // largest empty-probe distance found
  int probes = 0;
};

/// Exact uniform-discreteness check (min pairwise distance >= 2*r_pack, the
/// ball form restated for a length space) plus sampled relative-density
/// probes confined to the window's inradius.
DeloneReport delone_check(const PointSet& pts, double r_pack, double r_cov, int probes,
                          std::uint64_t seed);

}  // namespace particleforge
