#include "particleforge/battery.hpp"

#include <cmath>

#include "particleforge/models.hpp"
#include "particleforge/rng.hpp"

namespace particleforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

Graph z_nearest_neighbor(int radius) {
  GraphBuilder b(2 * radius + 1);
  for (int i = 0; i < 2 * radius; ++i) {
    b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  }
  return b.finish();
}

std::vector<CylinderObservable> voter_k3_observables() {
  return {
      {"all_equal", {0, 1, 2},
       [](const Configuration& x) {
         return (x[0].value == x[1].value && x[1].value == x[2].value) ? 1.0 : 0.0;
       }},
      {"x0", {0}, [](const Configuration& x) { return x[0].value; }},
      {"x1", {1}, [](const Configuration& x) { return x[1].value; }},
      {"mean_opinion", {0, 1, 2},
       [](const Configuration& x) { return (x[0].value + x[1].value + x[2].value) / 3.0; }},
      {"x0_minus_x1", {0, 1},
       [](const Configuration& x) { return x[0].value - x[1].value; }},
  };
}

std::vector<CylinderObservable> contact_k2_observables() {
  return {
      {"x0_infected", {0}, [](const Configuration& x) { return x[0].value; }},
      {"x1_infected", {1}, [](const Configuration& x) { return x[1].value; }},
      {"half_count", {0, 1},
       [](const Configuration& x) { return 0.5 * (x[0].value + x[1].value); }},
      {"any_infected", {0, 1},
       [](const Configuration& x) { return (x[0].value > 0.0 || x[1].value > 0.0) ? 1.0 : 0.0; }},
      {"x0_minus_x1", {0, 1},
       [](const Configuration& x) { return x[0].value - x[1].value; }},
  };
}

}  // namespace

double z_inverse_square_sum() { return kPi * kPi / 3.0; }

std::vector<ExperimentReport> run_bounds_suite(const BatteryOptions& opts) {
  std::vector<ExperimentReport> reports;

  LrpBoundParams lrp;
  lrp.radius = 200;
  lrp.j_exponent = 3.0;
  lrp.beta = 1.0;
  lrp.p = 1.5;
  lrp.j_limit = z_inverse_square_sum();  // sum |k|^(-3/p) = sum |k|^-2
  reports.push_back(
      lrp_degree_moment_bound(lrp, 4, opts.lrp_moment_replicas, replica_seed(opts.seed, 101)));
  reports.push_back(lrp_saw_sum_bound(lrp, 3, 30));

  GrgBoundParams grg;
  grg.radius = 10;
  grg.s = 2.0;
  grg.law = RadiusLaw::uniform(3.0);
  grg.p = 1.5;
  grg.s_limit = z_inverse_square_sum();
  reports.push_back(
      grg_degree_moment_bound(grg, 3, opts.grg_moment_replicas, replica_seed(opts.seed, 102)));
  reports.push_back(grg_saw_sum_bound(grg, 2, opts.grg_saw_replicas, opts.grg_saw_batches,
                                      replica_seed(opts.seed, 103)));

  reports.push_back(lrp_trail_growth(lrp, 12, 6, opts.trail_growth_replicas, 1,
                                     replica_seed(opts.seed, 104)));
  return reports;
}

std::vector<ExperimentReport> run_oracle_suite(const BatteryOptions& opts) {
  std::vector<ExperimentReport> reports;

  // Voter (k=1) on K3 started from (1,0,0).
  {
    Graph k3 = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    Window full = Window::full(k3);
    auto kernel = make_voter(1);
    std::vector<LocalState> domain{{0.0, 0.0}, {1.0, 0.0}};
    Configuration x0(3);
    x0[0] = {1.0, 0.0};
    OracleSetup setup{k3, full, *kernel, domain, false};
    reports.push_back(simulation_vs_oracle(setup, x0, 0.5, opts.oracle_replicas,
                                           replica_seed(opts.seed, 201)));
    reports.push_back(generator_consistency(setup, voter_k3_observables(), x0));
  }

  // Contact process (lambda=1.5, k=1) on K2 started from (1,0).
  {
    Graph k2 = Graph::from_edges(2, {{0, 1}});
    Window full = Window::full(k2);
    auto kernel = make_contact(1.5, 1);
    std::vector<LocalState> domain{{0.0, 0.0}, {1.0, 0.0}};
    Configuration x0(2);
    x0[0] = {1.0, 0.0};
    OracleSetup setup{k2, full, *kernel, domain, false};
    reports.push_back(simulation_vs_oracle(setup, x0, 0.3, opts.oracle_replicas,
                                           replica_seed(opts.seed, 202)));
    reports.push_back(generator_consistency(setup, contact_k2_observables(), x0));
  }

  return reports;
}

ExperimentReport run_percolation_battery(const BatteryOptions& opts) {
  Graph g = z_nearest_neighbor(30);
  std::vector<double> rates(g.vertex_count(), 1.0);
  PercolationParams params;
  params.delta = 0.05;
  params.n_min = 4;
  params.n_max = 10;
  params.replicas = opts.percolation_replicas;
  params.ratio_bound = 0.7;
  params.ratio_from = 6;
  return percolation_suite(g, rates, 30, params, replica_seed(opts.seed, 301),
                           HopMode::kTwoStep);
}

ExperimentReport run_convergence_battery(const BatteryOptions& opts) {
  const int radius = 100;
  PointSet pts = integer_lattice(1, radius);
  CouplingField field = CouplingField::power_law(3.0, 1.5, 1.0);
  Graph g = sample_lrp(pts, field, replica_seed(opts.seed, 401));

  auto kernel = make_voter(1);
  Configuration x0(g.vertex_count());
  std::uint64_t init_seed = replica_seed(opts.seed, 402);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    x0[v].value = rng::Stream(init_seed, rng::Lane::kInitial, v).uniform(0) < 0.5 ? 1.0 : 0.0;
  }

  std::vector<int> ladder{2, 5, 10, 25, 50, 100};
  std::vector<std::vector<VertexId>> cores;
  for (int m : ladder) {
    std::vector<VertexId> core;
    for (int c = -m; c <= m; ++c) core.push_back(static_cast<VertexId>(c + radius));
    cores.push_back(std::move(core));
  }

  WindowConvergenceResult res =
      window_convergence(g, *kernel, x0, static_cast<VertexId>(radius), 1.0, cores,
                         opts.convergence_seeds, replica_seed(opts.seed, 403),
                         /*certify_by=*/4, /*certify_quota=*/95);
  res.report.params["ladder_radii"] = ladder;
  return res.report;
}

}  // namespace particleforge
