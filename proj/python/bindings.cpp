#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "particleforge/battery.hpp"
#include "particleforge/config.hpp"
#include "particleforge/construction.hpp"
#include "particleforge/ctmc_oracle.hpp"
#include "particleforge/models.hpp"
#include "particleforge/parallel.hpp"
#include "particleforge/random_graphs.hpp"
#include "particleforge/saw.hpp"

namespace py = pybind11;
using namespace particleforge;

namespace {

std::vector<std::vector<double>> matrix_to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

Configuration to_configuration(const std::vector<std::pair<double, double>>& values) {
  Configuration x(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) x[i] = {values[i].first, values[i].second};
  return x;
}

std::vector<std::pair<double, double>> from_configuration(const Configuration& x) {
  std::vector<std::pair<double, double>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = {x[i].value, x[i].aux};
  return out;
}

std::unique_ptr<JumpKernel> kernel_from_json(const std::string& spec) {
  std::string text = std::string("{\"schema_version\":1,\"seed\":0,\"model\":") + spec + "}";
  return ExperimentConfig::parse(text).build_model();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interacting particle systems on finite graph windows";

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
             return Graph::from_edges(n, edges);
           }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::vertex_count)
      .def("degree", &Graph::degree)
      .def("has_edge", &Graph::has_edge)
      .def("edges", &Graph::edges)
      .def("neighbors",
           [](const Graph& g, VertexId v) {
             auto nb = g.neighbors(v);
             return std::vector<VertexId>(nb.begin(), nb.end());
           })
      .def("to_json", &Graph::to_json)
      .def_static("from_json", &Graph::from_json)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

  m.def("two_step_graph", &two_step_graph);
  m.def("neighborhood", &neighborhood);
  m.def("two_neighborhood", &two_neighborhood);
  m.def("graph_distance", [](const Graph& g, VertexId u, VertexId v) {
    return graph_distance(g, u, v);
  });

  m.def("enumerate_saws", &enumerate_saws);
  m.def("enumerate_remnant_saws", &enumerate_remnant_saws);
  m.def("is_remnant_saw", py::overload_cast<const Graph&, const Walk&>(&is_remnant_saw));
  m.def("reduce_path_to_remnant_saw",
        py::overload_cast<const Graph&, const Walk&>(&reduce_path_to_remnant_saw));
  m.def("connective_constant_estimate", &connective_constant_estimate);

  py::class_<TrailTable>(m, "TrailTable")
      .def_readonly("vertex", &TrailTable::vertex)
      .def_readonly("n_max", &TrailTable::n_max)
      .def_readonly("raw_simple", &TrailTable::raw_simple)
      .def_readonly("raw_double", &TrailTable::raw_double)
      .def_readonly("theta_simple", &TrailTable::theta_simple)
      .def_readonly("theta_double", &TrailTable::theta_double)
      .def("growth_diagnostic", &TrailTable::growth_diagnostic)
      .def("to_csv_rows", &TrailTable::to_csv_rows)
      .def_static("csv_header", &TrailTable::csv_header);

  m.def("trail_table",
        [](const Graph& g, const std::vector<double>& rates, VertexId v, int n_max) {
          return trail_table(g, rates, v, n_max);
        });

  py::class_<PointSet>(m, "PointSet")
      .def_readonly("points", &PointSet::points)
      .def_property_readonly("n", &PointSet::size)
      .def("distance", &PointSet::distance);
  m.def("integer_lattice", &integer_lattice);
  m.def("lattice_points", &lattice_points);

  m.def("sample_lrp_power_law",
        [](int dim, int radius, double exponent, double p, double beta, std::uint64_t seed) {
          PointSet pts = integer_lattice(dim, radius);
          Graph g = sample_lrp(pts, CouplingField::power_law(exponent, p, beta), seed);
          return std::pair<Graph, PointSet>(std::move(g), std::move(pts));
        },
        py::arg("dim"), py::arg("radius"), py::arg("exponent"), py::arg("p"), py::arg("beta"),
        py::arg("seed"));
  m.def("sample_grg_uniform",
        [](int dim, int radius, double upper, std::uint64_t seed) {
          PointSet pts = integer_lattice(dim, radius);
          Graph g = sample_grg(pts, RadiusLaw::uniform(upper), seed);
          return std::pair<Graph, PointSet>(std::move(g), std::move(pts));
        },
        py::arg("dim"), py::arg("radius"), py::arg("upper"), py::arg("seed"));
  m.def("p_sum_power_law", [](const PointSet& pts, double exponent, double p) {
    return p_sum(pts, CouplingField::power_law(exponent, p, 1.0));
  });
  m.def("s_sum", &s_sum);

  py::class_<ClockRealization>(m, "ClockRealization")
      .def_readonly("horizon", &ClockRealization::horizon)
      .def("total_events", &ClockRealization::total_events)
      .def("events",
           [](const ClockRealization& ck, VertexId v) {
             std::vector<std::pair<double, double>> out;
             for (const ClockEvent& e : ck.events.at(v)) out.push_back({e.time, e.mark});
             return out;
           })
      .def("to_csv", &ClockRealization::to_csv);
  m.def("sample_clocks", [](const Graph& g, const std::vector<double>& rates, double horizon,
                            std::uint64_t seed) { return sample_clocks(g, rates, horizon, seed); });

  py::enum_<HopMode>(m, "HopMode")
      .value("TWO_STEP", HopMode::kTwoStep)
      .value("ONE_STEP", HopMode::kOneStep);
  m.def("affects", py::overload_cast<const Graph&, const ClockRealization&, VertexId, VertexId,
                                     double, HopMode>(&affects));
  m.def("cluster", py::overload_cast<const Graph&, const ClockRealization&, VertexId, double,
                                     HopMode>(&cluster));
  m.def("generations", [](const Graph& g, const ClockRealization& ck, HopMode mode) {
    return generations(g, ck, mode).gen;
  });

  py::class_<JumpKernel>(m, "JumpKernel")
      .def_property_readonly("name", &JumpKernel::name)
      .def_property_readonly("self_updating", &JumpKernel::self_updating)
      .def("rate_bound", &JumpKernel::rate_bound);
  m.def("make_voter", &make_voter);
  m.def("make_contact", &make_contact);
  m.def("make_discrete_sandpile", &make_discrete_sandpile);
  m.def("make_divisible_sandpile", &make_divisible_sandpile);
  m.def("make_urn", &make_urn);
  m.def("make_birth_death", &make_birth_death);
  m.def("model_from_json", &kernel_from_json);
  m.def("rate_profile", &rate_profile);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("initial",
                             [](const Trajectory& t) { return from_configuration(t.initial); })
      .def_property_readonly("events",
                             [](const Trajectory& t) {
                               std::vector<py::dict> out;
                               for (const TrajectoryEvent& e : t.events) {
                                 py::dict d;
                                 d["t"] = e.time;
                                 d["v"] = e.vertex;
                                 d["nbhd"] = e.nbhd;
                                 d["after"] = [&] {
                                   std::vector<std::pair<double, double>> vals;
                                   for (const LocalState& s : e.after) {
                                     vals.push_back({s.value, s.aux});
                                   }
                                   return vals;
                                 }();
                                 out.push_back(std::move(d));
                               }
                               return out;
                             })
      .def("state_at",
           [](const Trajectory& t, double at) { return from_configuration(t.state_at(at)); })
      .def("to_jsonl", &Trajectory::to_jsonl);

  m.def("run",
        [](const Graph& g, const JumpKernel& kernel,
           const std::vector<std::pair<double, double>>& x0, const ClockRealization& clocks,
           double horizon, const std::optional<std::vector<VertexId>>& core) {
          Window w = core ? Window::make(g, *core) : Window::full(g);
          return run(g, w, kernel, to_configuration(x0), clocks, horizon);
        },
        py::arg("graph"), py::arg("kernel"), py::arg("x0"), py::arg("clocks"), py::arg("horizon"),
        py::arg("core") = std::nullopt);

  m.def("apply_generator",
        [](const Graph& g, const JumpKernel& kernel, const std::vector<VertexId>& base,
           const std::function<double(const std::vector<std::pair<double, double>>&)>& f,
           const std::vector<std::pair<double, double>>& x) {
          CylinderObservable obs{
              "py", base,
              [&f](const Configuration& c) { return f(from_configuration(c)); }};
          return apply_generator(g, Window::full(g), kernel, obs, to_configuration(x));
        });

  py::class_<CtmcOracle>(m, "CtmcOracle")
      .def(py::init([](const Graph& g, const JumpKernel& kernel,
                       const std::vector<std::pair<double, double>>& domain, bool absorbing_cap) {
             std::vector<LocalState> dom;
             for (auto [v, a] : domain) dom.push_back({v, a});
             return CtmcOracle(g, Window::full(g), kernel, dom, absorbing_cap);
           }),
           py::arg("graph"), py::arg("kernel"), py::arg("domain"),
           py::arg("absorbing_cap") = false)
      .def_property_readonly("state_count", &CtmcOracle::state_count)
      .def("generator_matrix",
           [](const CtmcOracle& o) { return matrix_to_rows(o.generator_matrix()); })
      .def("transition_matrix",
           [](const CtmcOracle& o, double t) { return matrix_to_rows(o.transition_matrix(t)); })
      .def("state_index",
           [](const CtmcOracle& o, const std::vector<std::pair<double, double>>& x) {
             return o.state_index(to_configuration(x));
           })
      .def("state",
           [](const CtmcOracle& o, std::size_t i) { return from_configuration(o.state(i)); });

  m.def("direct_affect_tail",
        [](const Graph& g, const std::vector<double>& rates, VertexId v, double delta, int n_min,
           int n_max, int replicas, std::uint64_t seed, HopMode mode) {
          auto curve = direct_affect_tail(g, rates, v, delta, n_min, n_max, replicas, seed, mode);
          std::vector<py::dict> out;
          for (const TailEstimate& e : curve) {
            py::dict d;
            d["n"] = e.n;
            d["horizon"] = e.horizon;
            d["forward"] = e.forward_freq;
            d["reverse"] = e.reverse_freq;
            out.push_back(std::move(d));
          }
          return out;
        });

  m.def("set_worker_count", &set_worker_count);
  m.def("saw_length_cap", &saw_length_cap);

  m.def("run_verification_battery", [](std::uint64_t seed, int scale_percent) {
    BatteryOptions opts;
    opts.seed = seed;
    auto scale = [&](int n) { return std::max(1, n * scale_percent / 100); };
    opts.lrp_moment_replicas = scale(opts.lrp_moment_replicas);
    opts.grg_moment_replicas = scale(opts.grg_moment_replicas);
    opts.grg_saw_replicas = scale(opts.grg_saw_replicas);
    opts.oracle_replicas = scale(opts.oracle_replicas);
    opts.percolation_replicas = scale(opts.percolation_replicas);
    opts.convergence_seeds = scale(opts.convergence_seeds);
    opts.trail_growth_replicas = scale(opts.trail_growth_replicas);
    std::vector<ExperimentReport> reports = run_bounds_suite(opts);
    auto oracle = run_oracle_suite(opts);
    reports.insert(reports.end(), oracle.begin(), oracle.end());
    reports.push_back(run_percolation_battery(opts));
    reports.push_back(run_convergence_battery(opts));
    std::vector<py::dict> out;
    for (const ExperimentReport& r : reports) {
      py::dict d;
      d["id"] = r.id;
      d["pass"] = r.pass();
      d["json"] = r.to_json().dump();
      out.push_back(std::move(d));
    }
    return out;
  }, py::arg("seed") = 424243, py::arg("scale_percent") = 100);
}
