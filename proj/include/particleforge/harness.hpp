#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "particleforge/construction.hpp"
#include "particleforge/ctmc_oracle.hpp"
#include "particleforge/graph.hpp"
#include "particleforge/ips.hpp"
#include "particleforge/random_graphs.hpp"

namespace particleforge {

/// One asserted inequality or equality, with the provenance of its target.
struct CheckLine {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  std::string relation;    // "<=", "==", ...
  std::string provenance;  // analytic constant, model inequality, oracle, ...
  bool pass = false;
};

struct ExperimentReport {
  std::string id;
  nlohmann::json params;
  nlohmann::json data;  // measured series, curves, diagnostics
  std::vector<CheckLine> checks;
  double runtime_seconds = 0.0;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string table() const;
};

/// Derives an independent replica seed from a master seed.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica);

// ---------------------------------------------------------------------------
// Oracle-based experiments

struct OracleSetup {
  const Graph& g;
  const Window& window;
  const JumpKernel& kernel;
  std::vector<LocalState> domain;
  bool absorbing_cap = false;
};

/// Compares the oracle derivative (P_t f - f)/t against apply_generator on a
/// shrinking time grid; asserts a linear-in-t error decay and a 2% endpoint.
ExperimentReport generator_consistency(const OracleSetup& setup,
                                       const std::vector<CylinderObservable>& observables,
                                       const Configuration& x,
                                       const std::vector<double>& t_grid = {0.04, 0.02, 0.01});

/// Total-variation distance between the empirical time-t distribution of the
/// event-driven simulation and the matrix-exponential row.
ExperimentReport simulation_vs_oracle(const OracleSetup& setup, const Configuration& x0, double t,
                                      int replicas, std::uint64_t seed, double tv_tolerance = 0.01);

// ---------------------------------------------------------------------------
// Window convergence

struct WindowConvergenceResult {
  ExperimentReport report;
  std::vector<int> certified_ladder_index;  // per seed: first window containing the cluster
};

/// Runs the truncated process on a ladder of windows with shared clocks and
/// checks event-for-event agreement at `v` for every window containing the
/// cluster certificate; `certify_by` is the ladder index that at least
/// `certify_quota` of the seeds must certify at.
WindowConvergenceResult window_convergence(const Graph& g, const JumpKernel& kernel,
                                           const Configuration& x0, VertexId v, double t,
                                           const std::vector<std::vector<VertexId>>& ladder_cores,
                                           int seeds, std::uint64_t master_seed, int certify_by,
                                           int certify_quota);

// ---------------------------------------------------------------------------
// Random-graph bound suites

struct LrpBoundParams {
  int radius = 200;           // Z window [-radius, radius]
  double j_exponent = 3.0;    // J(i,j) = |i-j|^-exponent
  double beta = 1.0;
  double p = 1.5;
  double j_limit = 0.0;       // analytic limiting J-sum (e.g. pi^2/3); required
};

/// Degree-moment bound: MC E[deg(0)^n] <= (beta*J)^n, one-sided 3 sigma.
ExperimentReport lrp_degree_moment_bound(const LrpBoundParams& params, int n_max, int replicas,
                                         std::uint64_t seed);

/// SAW-sum bound, exact by edge independence:
/// sum P(SAW)^(1/p) <= (beta^(1/p)*J)^n, no tolerance.
ExperimentReport lrp_saw_sum_bound(const LrpBoundParams& params, int n_max, int radius);

struct GrgBoundParams {
  int radius = 10;           // Z window
  double s = 2.0;
  RadiusLaw law = RadiusLaw::uniform(3.0);
  double p = 1.5;            // exponent used in the SAW-sum bound
  double s_limit = 0.0;      // analytic limiting S(V;s); required
};

/// Degree-moment bound: MC E[deg(0)^n] <= (K^{2s} S)^n, one-sided 3 sigma.
ExperimentReport grg_degree_moment_bound(const GrgBoundParams& params, int n_max, int replicas,
                                         std::uint64_t seed);

/// SAW-sum bound via Monte Carlo over radius draws (edges are dependent):
/// sum P_hat(SAW)^(1/p) <= K^{ceil(sp)/p} (S K^{ceil(sp)/p})^n, 3 sigma via
/// batch means.
ExperimentReport grg_saw_sum_bound(const GrgBoundParams& params, int n_max, int replicas,
                                   int batches, std::uint64_t seed);

/// Expected n-step double-trail raw sums on LRP replicas grow geometrically:
/// log-linear fit with bounded residuals.
ExperimentReport lrp_trail_growth(const LrpBoundParams& params, int window_radius, int n_max,
                                  int replicas, int degree_power, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Non-percolation tails

struct PercolationParams {
  double delta = 0.05;
  int n_min = 4;
  int n_max = 10;
  int replicas = 10'000;
  double ratio_bound = 0.7;
  int ratio_from = 6;  // enforce freq(n) <= bound*freq(n-1) for n >= this
};

ExperimentReport percolation_suite(const Graph& g, std::span<const double> rates, VertexId v,
                                   const PercolationParams& params, std::uint64_t seed,
                                   HopMode mode);

/// Renders reports as a human-readable table plus a JSON document.
std::string render_report_table(const std::vector<ExperimentReport>& reports);
nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports);

}  // namespace particleforge
