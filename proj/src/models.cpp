#include "particleforge/models.hpp"

#include <cmath>
#include <stdexcept>

namespace particleforge {

namespace {

double ipow(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

/// Index of v inside its own sorted neighborhood.
std::size_t self_index(const Graph& g, VertexId v) {
  std::size_t i = 0;
  for (VertexId w : g.neighbors(v)) {
    if (w < v) ++i;
  }
  return i;
}

class VoterKernel final : public JumpKernel {
 public:
  explicit VoterKernel(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("voter: k must be >= 1");
  }
  std::string name() const override { return "voter"; }
  bool self_updating() const override { return true; }
  double rate_bound(const Graph& g, VertexId v) const override {
    return ipow(static_cast<double>(g.degree(v)), k_);
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    std::size_t si = self_index(g, v);
    double own = local[si].value;
    int opposed = 0;
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (i != si && local[i].value != own) ++opposed;
    }
    return ipow(opposed, k_);
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    double rate = total_rate(g, v, local);
    if (rate == 0.0) return {};
    Target t;
    t.local.assign(local.begin(), local.end());
    std::size_t si = self_index(g, v);
    t.local[si].value = local[si].value == 0.0 ? 1.0 : 0.0;
    t.rate = rate;
    return {std::move(t)};
  }

 private:
  int k_;
};

class DiscreteSandpileKernel final : public JumpKernel {
 public:
  explicit DiscreteSandpileKernel(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("discrete_sandpile: k must be >= 1");
  }
  std::string name() const override { return "discrete_sandpile"; }
  bool self_updating() const override { return false; }
  double rate_bound(const Graph& g, VertexId v) const override {
    return ipow(static_cast<double>(g.degree(v)), k_);
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    double deg = static_cast<double>(g.degree(v));
    if (deg == 0.0) return 0.0;
    return local[self_index(g, v)].value > deg ? ipow(deg, k_) : 0.0;
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    double rate = total_rate(g, v, local);
    if (rate == 0.0) return {};
    double deg = static_cast<double>(g.degree(v));
    Target t;
    t.local.assign(local.begin(), local.end());
    std::size_t si = self_index(g, v);
    for (std::size_t i = 0; i < t.local.size(); ++i) {
      if (i == si) {
        t.local[i].value -= deg;
      } else {
        t.local[i].value += 1.0;
      }
    }
    t.rate = rate;
    return {std::move(t)};
  }

 private:
  int k_;
};

class DivisibleSandpileKernel final : public JumpKernel {
 public:
  DivisibleSandpileKernel(int k, double lambda) : k_(k), lambda_(lambda) {
    if (k < 1) throw std::invalid_argument("divisible_sandpile: k must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("divisible_sandpile: lambda must be > 0");
  }
  std::string name() const override { return "divisible_sandpile"; }
  bool self_updating() const override { return false; }
  double rate_bound(const Graph& g, VertexId v) const override {
    return ipow(static_cast<double>(g.degree(v)), k_);
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    if (g.degree(v) == 0) return 0.0;
    return local[self_index(g, v)].value > lambda_
               ? ipow(static_cast<double>(g.degree(v)), k_)
               : 0.0;
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    double rate = total_rate(g, v, local);
    if (rate == 0.0) return {};
    double share = lambda_ / static_cast<double>(g.degree(v));
    Target t;
    t.local.assign(local.begin(), local.end());
    std::size_t si = self_index(g, v);
    for (std::size_t i = 0; i < t.local.size(); ++i) {
      if (i == si) {
        t.local[i].value -= lambda_;
      } else {
        t.local[i].value += share;
      }
    }
    t.rate = rate;
    return {std::move(t)};
  }

 private:
  int k_;
  double lambda_;
};

class ContactKernel final : public JumpKernel {
 public:
  ContactKernel(double lambda, int k) : lambda_(lambda), k_(k) {
    if (!(lambda > 0.0)) throw std::invalid_argument("contact: lambda must be > 0");
    if (k < 1) throw std::invalid_argument("contact: k must be >= 1");
  }
  std::string name() const override { return "contact"; }
  bool self_updating() const override { return true; }
  double rate_bound(const Graph& g, VertexId v) const override {
    // Recovery (rate 1) and infection share one clock via thinning.
    return std::max(1.0, lambda_ * ipow(static_cast<double>(g.degree(v)), k_));
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    std::size_t si = self_index(g, v);
    if (local[si].value != 0.0) return 1.0;  // infected: recovery
    int infected = 0;
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (i != si && local[i].value != 0.0) ++infected;
    }
    return lambda_ * ipow(infected, k_);
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    double rate = total_rate(g, v, local);
    if (rate == 0.0) return {};
    Target t;
    t.local.assign(local.begin(), local.end());
    std::size_t si = self_index(g, v);
    t.local[si].value = local[si].value == 0.0 ? 1.0 : 0.0;
    t.rate = rate;
    return {std::move(t)};
  }

 private:
  double lambda_;
  int k_;
};

class UrnKernel final : public JumpKernel {
 public:
  UrnKernel(int alpha_white, int beta_black, int m, int k)
      : alpha_(alpha_white), beta_(beta_black), m_(m), k_(k) {
    if (m < 1) throw std::invalid_argument("urn: m must be >= 1");
    if (alpha_white < 0 || alpha_white > m) throw std::invalid_argument("urn: need 0 <= alpha <= m");
    if (beta_black < 0 || beta_black > m) throw std::invalid_argument("urn: need 0 <= beta <= m");
    if (k < 1) throw std::invalid_argument("urn: k must be >= 1");
  }
  std::string name() const override { return "urn"; }
  bool self_updating() const override { return false; }
  double rate_bound(const Graph& g, VertexId v) const override {
    return ipow(static_cast<double>(g.degree(v)), k_);
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    if (g.degree(v) == 0) return 0.0;
    std::size_t si = self_index(g, v);
    double balls = local[si].value + local[si].aux;
    if (balls <= 0.0) return 0.0;  // empty urn: nothing to draw
    return ipow(static_cast<double>(g.degree(v)), k_);
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    double rate = total_rate(g, v, local);
    if (rate == 0.0) return {};
    std::size_t si = self_index(g, v);
    double white = local[si].value;
    double black = local[si].aux;
    double balls = white + black;

    auto branch = [&](double add_white, double add_black, double p) {
      Target t;
      t.local.assign(local.begin(), local.end());
      for (std::size_t i = 0; i < t.local.size(); ++i) {
        if (i == si) continue;
        t.local[i].value += add_white;
        t.local[i].aux += add_black;
      }
      t.rate = rate * p;
      return t;
    };

    std::vector<Target> out;
    if (white > 0.0) out.push_back(branch(alpha_, m_ - alpha_, white / balls));
    if (black > 0.0) out.push_back(branch(m_ - beta_, beta_, black / balls));
    return out;
  }

 private:
  int alpha_;
  int beta_;
  int m_;
  int k_;
};

class BirthDeathKernel final : public JumpKernel {
 public:
  BirthDeathKernel(double b0, double d0, double lambda) : b0_(b0), d0_(d0), lambda_(lambda) {
    if (b0 < 0.0 || d0 < 0.0 || lambda < 0.0) {
      throw std::invalid_argument("birth_death: rates must be non-negative");
    }
  }
  std::string name() const override { return "birth_death"; }
  bool self_updating() const override { return true; }
  double rate_bound(const Graph& g, VertexId v) const override {
    return b0_ + d0_ + lambda_ * static_cast<double>(g.degree(v));
  }
  double total_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const override {
    return b0_ + death_rate(g, v, local);
  }
  std::vector<Target> targets(const Graph& g, VertexId v,
                              std::span<const LocalState> local) const override {
    std::vector<Target> out;
    std::size_t si = self_index(g, v);
    if (b0_ > 0.0) {
      Target birth;
      birth.local.assign(local.begin(), local.end());
      birth.local[si].value += 1.0;
      birth.rate = b0_;
      out.push_back(std::move(birth));
    }
    double dr = death_rate(g, v, local);
    if (dr > 0.0) {
      Target death;
      death.local.assign(local.begin(), local.end());
      death.local[si].value -= 1.0;
      death.rate = dr;
      out.push_back(std::move(death));
    }
    return out;
  }

 private:
  double death_rate(const Graph& g, VertexId v, std::span<const LocalState> local) const {
    std::size_t si = self_index(g, v);
    if (local[si].value <= 0.0) return 0.0;
    int occupied = 0;
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (i != si && local[i].value > 0.0) ++occupied;
    }
    return d0_ + lambda_ * occupied;
  }

  double b0_;
  double d0_;
  double lambda_;
};

}  // namespace

std::unique_ptr<JumpKernel> make_voter(int k) { return std::make_unique<VoterKernel>(k); }

std::unique_ptr<JumpKernel> make_discrete_sandpile(int k) {
  return std::make_unique<DiscreteSandpileKernel>(k);
}

std::unique_ptr<JumpKernel> make_divisible_sandpile(int k, double lambda) {
  return std::make_unique<DivisibleSandpileKernel>(k, lambda);
}

std::unique_ptr<JumpKernel> make_contact(double lambda, int k) {
  return std::make_unique<ContactKernel>(lambda, k);
}

std::unique_ptr<JumpKernel> make_urn(int alpha_white, int beta_black, int m, int k) {
  return std::make_unique<UrnKernel>(alpha_white, beta_black, m, k);
}

std::unique_ptr<JumpKernel> make_birth_death(double b0, double d0, double lambda) {
  return std::make_unique<BirthDeathKernel>(b0, d0, lambda);
}

}  // namespace particleforge
