#include "particleforge/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "particleforge/models.hpp"
#include "particleforge/rng.hpp"

namespace particleforge {

namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t string_tag(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

const nlohmann::json& require(const nlohmann::json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.contains(key)) {
    throw std::invalid_argument("config: missing \"" + key + "\" in " + where);
  }
  return obj.at(key);
}

}  // namespace

namespace {

void validate_graph_spec(const nlohmann::json& spec) {
  std::string model = require(spec, "model", "graph").get<std::string>();
  if (model == "explicit") {
    reject_unknown_keys(spec, {"model", "n", "edges", "file"}, "graph");
    if (spec.contains("file")) {
      std::ifstream probe(spec["file"].get<std::string>());
      if (!probe) {
        throw std::invalid_argument("config: graph file " + spec["file"].get<std::string>() +
                                    " does not exist");
      }
    } else {
      require(spec, "n", "graph");
      require(spec, "edges", "graph");
    }
  } else if (model == "lattice") {
    reject_unknown_keys(spec, {"model", "window"}, "graph");
    require(spec, "window", "graph");
  } else if (model == "lrp") {
    reject_unknown_keys(spec, {"model", "beta", "J", "p", "window"}, "graph");
    reject_unknown_keys(require(spec, "J", "graph"), {"kind", "exponent"}, "graph.J");
    require(spec, "beta", "graph");
    require(spec, "p", "graph");
    require(spec, "window", "graph");
  } else if (model == "grg") {
    reject_unknown_keys(spec, {"model", "s", "law", "window"}, "graph");
    reject_unknown_keys(require(spec, "law", "graph"), {"kind", "upper", "value"}, "graph.law");
    require(spec, "s", "graph");
    require(spec, "window", "graph");
  } else {
    throw std::invalid_argument("config: unknown graph model \"" + model + "\"");
  }
  if (spec.contains("window")) {
    reject_unknown_keys(spec["window"], {"dim", "radius"}, "graph.window");
    require(spec["window"], "dim", "graph.window");
    require(spec["window"], "radius", "graph.window");
  }
}

void validate_model_spec(const nlohmann::json& spec) {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"voter", {"kind", "k"}},
      {"contact", {"kind", "lambda", "k"}},
      {"discrete_sandpile", {"kind", "k"}},
      {"divisible_sandpile", {"kind", "k", "lambda"}},
      {"urn", {"kind", "alpha", "beta", "m", "k"}},
      {"birth_death", {"kind", "b0", "d0", "lambda"}},
  };
  std::string kind = require(spec, "kind", "model").get<std::string>();
  auto it = kinds.find(kind);
  if (it == kinds.end()) {
    throw std::invalid_argument("config: unknown model kind \"" + kind + "\"");
  }
  reject_unknown_keys(spec, it->second, "model");
}

void validate_initial_spec(const nlohmann::json& spec) {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"constant", {"kind", "value", "aux"}},
      {"bernoulli", {"kind", "p"}},
      {"uniform_int", {"kind", "lo", "hi"}},
      {"explicit", {"kind", "values"}},
  };
  std::string kind = require(spec, "kind", "initial").get<std::string>();
  auto it = kinds.find(kind);
  if (it == kinds.end()) {
    throw std::invalid_argument("config: unknown initial kind \"" + kind + "\"");
  }
  reject_unknown_keys(spec, it->second, "initial");
}

void validate_sections(const nlohmann::json& raw) {
  if (raw.contains("graph")) validate_graph_spec(raw["graph"]);
  if (raw.contains("model")) validate_model_spec(raw["model"]);
  if (raw.contains("initial")) validate_initial_spec(raw["initial"]);
  if (raw.contains("horizon") && !raw["horizon"].is_number()) {
    throw std::invalid_argument("config: horizon must be a number");
  }
  if (raw.contains("window_ladder")) {
    if (!raw["window_ladder"].is_array()) {
      throw std::invalid_argument("config: window_ladder must be an array");
    }
  }
  if (raw.contains("trails")) {
    reject_unknown_keys(raw["trails"], {"n_max", "vertices"}, "trails");
  }
  if (raw.contains("simulate")) {
    reject_unknown_keys(raw["simulate"], {"core"}, "simulate");
  }
  if (raw.contains("verify")) {
    reject_unknown_keys(raw["verify"],
                        {"experiments", "seed", "lrp_moment_replicas", "grg_moment_replicas",
                         "grg_saw_replicas", "grg_saw_batches", "oracle_replicas",
                         "percolation_replicas", "convergence_seeds", "trail_growth_replicas"},
                        "verify");
  }
  if (raw.contains("plot_data")) {
    reject_unknown_keys(raw["plot_data"],
                        {"percolation_replicas", "oracle_replicas", "trail_n_max"}, "plot_data");
  }
}

}  // namespace

void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw std::invalid_argument("config: unknown field \"" + it.key() + "\" in " + where);
    }
  }
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_ = nlohmann::json::parse(text);
  reject_unknown_keys(cfg.raw_,
                      {"schema_version", "seed", "output_dir", "workers", "graph", "model",
                       "initial", "horizon", "window_ladder", "trails", "simulate", "verify",
                       "plot_data"},
                      "top level");
  int version = require(cfg.raw_, "schema_version", "top level").get<int>();
  if (version != kSchemaVersion) {
    throw std::invalid_argument("config: unsupported schema_version " + std::to_string(version));
  }
  cfg.seed_ = require(cfg.raw_, "seed", "top level").get<std::uint64_t>();
  if (cfg.raw_.contains("output_dir")) cfg.output_dir_ = cfg.raw_["output_dir"].get<std::string>();
  if (cfg.raw_.contains("workers")) cfg.workers_ = cfg.raw_["workers"].get<unsigned>();
  validate_sections(cfg.raw_);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const nlohmann::json& ExperimentConfig::section(const std::string& name) const {
  return require(raw_, name, "top level");
}

std::uint64_t ExperimentConfig::sub_seed(const std::string& purpose) const {
  return rng::Stream(seed_, rng::Lane::kScratch, string_tag(purpose)).bits(0);
}

ExperimentConfig::BuiltGraph ExperimentConfig::build_graph() const {
  const nlohmann::json& spec = section("graph");
  std::string model = require(spec, "model", "graph").get<std::string>();

  auto window_points = [&](const nlohmann::json& g) {
    const nlohmann::json& w = require(g, "window", "graph");
    reject_unknown_keys(w, {"dim", "radius"}, "graph.window");
    int dim = require(w, "dim", "graph.window").get<int>();
    int radius = require(w, "radius", "graph.window").get<int>();
    PointSet pts = integer_lattice(dim, radius);
    // Row-major enumeration from -radius puts the origin in the middle.
    VertexId center = static_cast<VertexId>((pts.size() - 1) / 2);
    return std::pair<PointSet, VertexId>{std::move(pts), center};
  };

  if (model == "explicit") {
    reject_unknown_keys(spec, {"model", "n", "edges", "file"}, "graph");
    if (spec.contains("file")) {
      std::ifstream in(spec["file"].get<std::string>());
      if (!in) {
        throw std::invalid_argument("config: graph file " + spec["file"].get<std::string>() +
                                    " does not exist");
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      return {Graph::from_json(buf.str()), std::nullopt, 0};
    }
    std::size_t n = require(spec, "n", "graph").get<std::size_t>();
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& e : require(spec, "edges", "graph")) {
      edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    }
    return {Graph::from_edges(n, edges), std::nullopt, 0};
  }

  if (model == "lattice") {
    reject_unknown_keys(spec, {"model", "window"}, "graph");
    auto [pts, center] = window_points(spec);
    GraphBuilder b(pts.size());
    for (VertexId u = 0; u < pts.size(); ++u) {
      for (VertexId v = u + 1; v < pts.size(); ++v) {
        if (std::abs(pts.distance(u, v) - 1.0) < 1e-9) b.add_edge(u, v);
      }
    }
    return {b.finish(), std::move(pts), center};
  }

  if (model == "lrp") {
    reject_unknown_keys(spec, {"model", "beta", "J", "p", "window"}, "graph");
    const nlohmann::json& jspec = require(spec, "J", "graph");
    reject_unknown_keys(jspec, {"kind", "exponent"}, "graph.J");
    if (require(jspec, "kind", "graph.J").get<std::string>() != "power") {
      throw std::invalid_argument("config: only the power-law coupling field is built in");
    }
    CouplingField field = CouplingField::power_law(
        require(jspec, "exponent", "graph.J").get<double>(),
        require(spec, "p", "graph").get<double>(), require(spec, "beta", "graph").get<double>());
    auto [pts, center] = window_points(spec);
    Graph g = sample_lrp(pts, field, sub_seed("graph"));
    return {std::move(g), std::move(pts), center};
  }

  if (model == "grg") {
    reject_unknown_keys(spec, {"model", "s", "law", "window"}, "graph");
    const nlohmann::json& lspec = require(spec, "law", "graph");
    reject_unknown_keys(lspec, {"kind", "upper", "value"}, "graph.law");
    std::string kind = require(lspec, "kind", "graph.law").get<std::string>();
    RadiusLaw law = kind == "uniform"
                        ? RadiusLaw::uniform(require(lspec, "upper", "graph.law").get<double>())
                        : RadiusLaw::constant(require(lspec, "value", "graph.law").get<double>());
    auto [pts, center] = window_points(spec);
    Graph g = sample_grg(pts, law, sub_seed("graph"));
    return {std::move(g), std::move(pts), center};
  }

  throw std::invalid_argument("config: unknown graph model \"" + model + "\"");
}

std::unique_ptr<JumpKernel> ExperimentConfig::build_model() const {
  const nlohmann::json& spec = section("model");
  std::string kind = require(spec, "kind", "model").get<std::string>();
  if (kind == "voter") {
    reject_unknown_keys(spec, {"kind", "k"}, "model");
    return make_voter(require(spec, "k", "model").get<int>());
  }
  if (kind == "contact") {
    reject_unknown_keys(spec, {"kind", "lambda", "k"}, "model");
    return make_contact(require(spec, "lambda", "model").get<double>(),
                        require(spec, "k", "model").get<int>());
  }
  if (kind == "discrete_sandpile") {
    reject_unknown_keys(spec, {"kind", "k"}, "model");
    return make_discrete_sandpile(require(spec, "k", "model").get<int>());
  }
  if (kind == "divisible_sandpile") {
    reject_unknown_keys(spec, {"kind", "k", "lambda"}, "model");
    return make_divisible_sandpile(require(spec, "k", "model").get<int>(),
                                   require(spec, "lambda", "model").get<double>());
  }
  if (kind == "urn") {
    reject_unknown_keys(spec, {"kind", "alpha", "beta", "m", "k"}, "model");
    return make_urn(require(spec, "alpha", "model").get<int>(),
                    require(spec, "beta", "model").get<int>(),
                    require(spec, "m", "model").get<int>(), require(spec, "k", "model").get<int>());
  }
  if (kind == "birth_death") {
    reject_unknown_keys(spec, {"kind", "b0", "d0", "lambda"}, "model");
    return make_birth_death(require(spec, "b0", "model").get<double>(),
                            require(spec, "d0", "model").get<double>(),
                            require(spec, "lambda", "model").get<double>());
  }
  throw std::invalid_argument("config: unknown model kind \"" + kind + "\"");
}

Configuration ExperimentConfig::build_initial(const Graph& g) const {
  const nlohmann::json& spec = section("initial");
  std::string kind = require(spec, "kind", "initial").get<std::string>();
  Configuration x(g.vertex_count());
  std::uint64_t s = sub_seed("initial");

  if (kind == "constant") {
    reject_unknown_keys(spec, {"kind", "value", "aux"}, "initial");
    double value = require(spec, "value", "initial").get<double>();
    double aux = spec.contains("aux") ? spec["aux"].get<double>() : 0.0;
    for (auto& st : x) st = {value, aux};
    return x;
  }
  if (kind == "bernoulli") {
    reject_unknown_keys(spec, {"kind", "p"}, "initial");
    double p = require(spec, "p", "initial").get<double>();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      x[v].value = rng::Stream(s, rng::Lane::kInitial, v).uniform(0) < p ? 1.0 : 0.0;
    }
    return x;
  }
  if (kind == "uniform_int") {
    reject_unknown_keys(spec, {"kind", "lo", "hi"}, "initial");
    long lo = require(spec, "lo", "initial").get<long>();
    long hi = require(spec, "hi", "initial").get<long>();
    if (hi < lo) throw std::invalid_argument("config: initial.hi < initial.lo");
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      double u = rng::Stream(s, rng::Lane::kInitial, v).uniform(0);
      x[v].value = static_cast<double>(lo + static_cast<long>(u * static_cast<double>(hi - lo + 1)));
    }
    return x;
  }
  if (kind == "explicit") {
    reject_unknown_keys(spec, {"kind", "values"}, "initial");
    const auto& values = require(spec, "values", "initial");
    if (values.size() != g.vertex_count()) {
      throw std::invalid_argument("config: initial.values size mismatch");
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const auto& e = values.at(v);
      if (e.is_array()) {
        x[v] = {e.at(0).get<double>(), e.at(1).get<double>()};
      } else {
        x[v] = {e.get<double>(), 0.0};
      }
    }
    return x;
  }
  throw std::invalid_argument("config: unknown initial kind \"" + kind + "\"");
}

}  // namespace particleforge
