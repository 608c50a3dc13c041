#pragma once

#include <cstdint>
#include <vector>

#include "particleforge/harness.hpp"

namespace particleforge {

/// Committed parameters for the verification battery. Seeds and replica
/// counts are fixed here (and in the shipped configs) so reruns are
/// bit-identical; the analytic constants are pinned targets, not fits.
struct BatteryOptions {
  std::uint64_t seed = 424243;
  int lrp_moment_replicas = 100'000;
  int grg_moment_replicas = 100'000;
  int grg_saw_replicas = 100'000;
  int grg_saw_batches = 20;
  int oracle_replicas = 100'000;
  int percolation_replicas = 10'000;
  int convergence_seeds = 100;
  int trail_growth_replicas = 200;
};

/// Analytic limit of sum_{k!=0} |k|^-2 on Z: pi^2/3.
double z_inverse_square_sum();

/// LRP and GRG bound suites (degree moments, SAW sums, trail growth).
std::vector<ExperimentReport> run_bounds_suite(const BatteryOptions& opts);

/// Voter on K3 and contact on K2 against the matrix-exponential oracle:
/// distribution match plus generator limit.
std::vector<ExperimentReport> run_oracle_suite(const BatteryOptions& opts);

/// Non-percolation tail decay on the Z nearest-neighbor window.
ExperimentReport run_percolation_battery(const BatteryOptions& opts);

/// Window-ladder convergence of the voter model on an LRP-on-Z realization.
ExperimentReport run_convergence_battery(const BatteryOptions& opts);

}  // namespace particleforge
