#include "particleforge/ctmc_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace particleforge {

namespace {

int domain_index_of(const std::vector<LocalState>& domain, const LocalState& s, bool clamp,
                    bool* clamped) {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == s) return static_cast<int>(i);
  }
  if (!clamp) return -1;
  // Clamp by value to the nearest domain entry (grain-count truncation).
  int best = 0;
  double best_d = std::abs(domain[0].value - s.value);
  for (std::size_t i = 1; i < domain.size(); ++i) {
    double d = std::abs(domain[i].value - s.value);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  *clamped = true;
  return best;
}

}  // namespace

CtmcOracle::CtmcOracle(const Graph& g, const Window& window, const JumpKernel& kernel,
                       std::vector<LocalState> domain, bool absorbing_cap,
                       std::size_t max_states)
    : g_(g), window_(window), domain_(std::move(domain)), absorbing_cap_(absorbing_cap) {
  if (domain_.empty()) throw std::invalid_argument("CtmcOracle: empty local domain");
  const std::size_t sites = g.vertex_count();
  double count = std::pow(static_cast<double>(domain_.size()), static_cast<double>(sites));
  if (count > static_cast<double>(max_states)) {
    throw std::invalid_argument("CtmcOracle: state space too large (" + std::to_string(count) +
                                " > " + std::to_string(max_states) + ")");
  }
  std::size_t n_states = static_cast<std::size_t>(count + 0.5);

  // Mixed-radix enumeration of domain^sites.
  states_.reserve(n_states);
  std::vector<int> digits(sites, 0);
  for (std::size_t s = 0; s < n_states; ++s) {
    Configuration x(sites);
    for (std::size_t v = 0; v < sites; ++v) x[v] = domain_[digits[v]];
    index_[digits] = s;
    states_.push_back(std::move(x));
    for (std::size_t v = 0; v < sites; ++v) {
      if (++digits[v] < static_cast<int>(domain_.size())) break;
      digits[v] = 0;
    }
  }

  auto is_absorbing = [&](const std::vector<int>& enc) {
    if (!absorbing_cap_) return false;
    int cap = static_cast<int>(domain_.size()) - 1;
    return std::any_of(enc.begin(), enc.end(), [cap](int d) { return d == cap; });
  };

  q_ = Eigen::MatrixXd::Zero(n_states, n_states);
  std::vector<LocalState> local;
  for (std::size_t s = 0; s < n_states; ++s) {
    const Configuration& x = states_[s];
    std::vector<int> enc = encode(x);
    if (is_absorbing(enc)) continue;
    for (VertexId v : window_.core) {
      auto nbhd = neighborhood(g, v);
      local.resize(nbhd.size());
      for (std::size_t i = 0; i < nbhd.size(); ++i) local[i] = x[nbhd[i]];
      for (const auto& target : kernel.targets(g, v, local)) {
        std::vector<int> enc_y = enc;
        for (std::size_t i = 0; i < nbhd.size(); ++i) {
          enc_y[nbhd[i]] =
              domain_index_of(domain_, target.local[i], absorbing_cap_, &truncated_);
          if (enc_y[nbhd[i]] < 0) {
            throw std::invalid_argument("CtmcOracle: jump target leaves the local domain");
          }
        }
        std::size_t y = index_.at(enc_y);
        if (y == s) continue;
        q_(s, y) += target.rate;
        q_(s, s) -= target.rate;
      }
    }
  }
}

std::vector<int> CtmcOracle::encode(const Configuration& x) const {
  std::vector<int> enc(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) {
    bool clamped = false;
    int d = domain_index_of(domain_, x[v], absorbing_cap_, &clamped);
    if (d < 0) throw std::invalid_argument("CtmcOracle: configuration outside the local domain");
    enc[v] = d;
  }
  return enc;
}

std::size_t CtmcOracle::state_index(const Configuration& x) const {
  if (x.size() != g_.vertex_count()) {
    throw std::invalid_argument("CtmcOracle: configuration size mismatch");
  }
  return index_.at(encode(x));
}

Eigen::MatrixXd CtmcOracle::transition_matrix(double t) const {
  Eigen::MatrixXd m = (t * q_).exp();
  return m;
}

double CtmcOracle::cap_mass(const Configuration& x0, double t) const {
  if (!absorbing_cap_) return 0.0;
  Eigen::MatrixXd pt = transition_matrix(t);
  std::size_t row = state_index(x0);
  int cap = static_cast<int>(domain_.size()) - 1;
  double mass = 0.0;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    std::vector<int> enc = encode(states_[s]);
    if (std::any_of(enc.begin(), enc.end(), [cap](int d) { return d == cap; })) {
      mass += pt(row, s);
    }
  }
  return mass;
}

double CtmcOracle::max_row_sum() const {
  return q_.rowwise().sum().cwiseAbs().maxCoeff();
}

double CtmcOracle::chapman_kolmogorov_defect(double s, double t) const {
  Eigen::MatrixXd ps = transition_matrix(s);
  Eigen::MatrixXd pt = transition_matrix(t);
  Eigen::MatrixXd pst = transition_matrix(s + t);
  return (ps * pt - pst).cwiseAbs().maxCoeff();
}

}  // namespace particleforge
