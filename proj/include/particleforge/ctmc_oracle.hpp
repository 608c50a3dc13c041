#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <vector>

#include "particleforge/graph.hpp"
#include "particleforge/ips.hpp"

namespace particleforge {

/// Exact finite-state oracle for a model on a tiny window: enumerates the
/// product state space, assembles the generator matrix from the jump
/// kernels, and exposes transient distributions through the matrix
/// exponential. Independent of the event-driven simulation path.
class CtmcOracle {
 public:
  /// `domain` lists the local states a single site may take. The product
  /// space domain^|W| must stay within max_states. When `absorbing_cap` is
  /// set, states containing a coordinate outside the domain are clamped to
  /// the nearest domain value and rows whose site value equals the last
  /// domain entry become absorbing (sandpile truncation).
  CtmcOracle(const Graph& g, const Window& window, const JumpKernel& kernel,
             std::vector<LocalState> domain, bool absorbing_cap = false,
             std::size_t max_states = 50'000);

  std::size_t state_count() const { return states_.size(); }
  const Eigen::MatrixXd& generator_matrix() const { return q_; }
  Eigen::MatrixXd transition_matrix(double t) const;  // exp(tQ)

  std::size_t state_index(const Configuration& x) const;
  const Configuration& state(std::size_t index) const { return states_[index]; }

  /// Whether truncation clamping was ever needed while assembling Q.
  bool truncated() const { return truncated_; }

  /// Probability of sitting in an absorbing cap state at time t from x0.
  double cap_mass(const Configuration& x0, double t) const;

  /// max |row sum| of Q; should be ~0.
  double max_row_sum() const;
  /// max entry of |P_s P_t - P_{s+t}|.
  double chapman_kolmogorov_defect(double s, double t) const;

 private:
  Graph g_;
  Window window_;
  std::vector<LocalState> domain_;
  std::vector<Configuration> states_;
  std::map<std::vector<int>, std::size_t> index_;  // domain-index encoding
  Eigen::MatrixXd q_;
  bool absorbing_cap_ = false;
  bool truncated_ = false;

  std::vector<int> encode(const Configuration& x) const;
};

}  // namespace particleforge
