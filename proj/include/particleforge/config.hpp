#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "particleforge/graph.hpp"
#include "particleforge/ips.hpp"
#include "particleforge/random_graphs.hpp"

namespace particleforge {

/// Parsed experiment configuration. Schema version 1; unknown fields are
/// rejected so typos fail loudly. Seeds always come from the file (or the
/// --seed override), never from the wall clock.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  std::uint64_t seed() const { return seed_; }
  void override_seed(std::uint64_t s) { seed_ = s; }
  const std::string& output_dir() const { return output_dir_; }
  void override_output_dir(std::string dir) { output_dir_ = std::move(dir); }
  unsigned workers() const { return workers_; }

  bool has(const std::string& section) const { return raw_.contains(section); }
  const nlohmann::json& section(const std::string& name) const;
  const nlohmann::json& raw() const { return raw_; }

  struct BuiltGraph {
    Graph graph;
    std::optional<PointSet> points;  // set for sampled / lattice universes
    VertexId center = 0;             // canonical probe vertex
  };

  /// Realizes the "graph" section; sampling is keyed off the master seed.
  BuiltGraph build_graph() const;

  /// Instantiates the "model" section.
  std::unique_ptr<JumpKernel> build_model() const;

  /// Samples the "initial" section for the given graph.
  Configuration build_initial(const Graph& g) const;

  /// Sub-seed for a named purpose, derived from the master seed.
  std::uint64_t sub_seed(const std::string& purpose) const;

 private:
  nlohmann::json raw_;
  std::uint64_t seed_ = 0;
  std::string output_dir_ = "out";
  unsigned workers_ = 0;
};

/// Throws when `obj` holds keys outside `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& where);

}  // namespace particleforge
