#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "particleforge/battery.hpp"
#include "particleforge/config.hpp"
#include "particleforge/construction.hpp"
#include "particleforge/models.hpp"
#include "particleforge/parallel.hpp"
#include "particleforge/saw.hpp"

namespace pf = particleforge;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::string experiment;
};

pf::ExperimentConfig load_config(const CommonArgs& args) {
  pf::ExperimentConfig cfg = pf::ExperimentConfig::load(args.config_path);
  if (args.seed) cfg.override_seed(*args.seed);
  if (!args.out_dir.empty()) cfg.override_output_dir(args.out_dir);
  unsigned workers = args.workers != 0 ? args.workers : cfg.workers();
  pf::set_worker_count(workers);
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << '\n';
}

int cmd_gen_graph(const CommonArgs& args) {
  pf::ExperimentConfig cfg = load_config(args);
  auto built = cfg.build_graph();
  write_file(fs::path(cfg.output_dir()) / "graph.json", built.graph.to_json());
  return 0;
}

int cmd_trails(const CommonArgs& args) {
  pf::ExperimentConfig cfg = load_config(args);
  auto built = cfg.build_graph();
  auto kernel = cfg.build_model();
  std::vector<double> rates = pf::rate_profile(built.graph, *kernel);

  nlohmann::json spec =
      cfg.has("trails") ? cfg.section("trails") : nlohmann::json::object();
  pf::reject_unknown_keys(spec, {"n_max", "vertices"}, "trails");
  int n_max = spec.contains("n_max") ? spec["n_max"].get<int>() : 6;
  std::vector<pf::VertexId> vertices;
  if (!spec.contains("vertices") || spec["vertices"] == "center") {
    vertices.push_back(built.center);
  } else if (spec["vertices"] == "all") {
    for (pf::VertexId v = 0; v < built.graph.vertex_count(); ++v) vertices.push_back(v);
  } else {
    for (const auto& v : spec["vertices"]) vertices.push_back(v.get<pf::VertexId>());
  }

  pf::Graph g_plus = pf::two_step_graph(built.graph);
  std::ostringstream csv;
  csv << pf::TrailTable::csv_header() << '\n';
  for (pf::VertexId v : vertices) {
    csv << pf::trail_table(built.graph, g_plus, rates, v, n_max).to_csv_rows();
  }
  write_file(fs::path(cfg.output_dir()) / "trails.csv", csv.str());
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  pf::ExperimentConfig cfg = load_config(args);
  auto built = cfg.build_graph();
  auto kernel = cfg.build_model();
  pf::Configuration x0 = cfg.build_initial(built.graph);
  double horizon = cfg.section("horizon").get<double>();

  pf::Window window = pf::Window::full(built.graph);
  if (cfg.has("simulate")) {
    const nlohmann::json& spec = cfg.section("simulate");
    pf::reject_unknown_keys(spec, {"core"}, "simulate");
    if (spec.contains("core")) {
      std::vector<pf::VertexId> core;
      for (const auto& v : spec["core"]) core.push_back(v.get<pf::VertexId>());
      window = pf::Window::make(built.graph, core);
    }
  }

  std::vector<double> rates = pf::rate_profile(built.graph, *kernel);
  pf::ClockRealization clocks =
      pf::sample_clocks(built.graph, rates, horizon, cfg.sub_seed("clocks"));
  pf::Trajectory traj = pf::run(built.graph, window, *kernel, x0, clocks, horizon);
  if (traj.simultaneous_time_ties > 0) {
    std::cerr << "warning: " << traj.simultaneous_time_ties
              << " simultaneous event time(s); ties broken by vertex id\n";
  }

  write_file(fs::path(cfg.output_dir()) / "trajectory.jsonl", traj.to_jsonl());
  write_file(fs::path(cfg.output_dir()) / "clocks.csv",
             pf::ClockRealization::csv_header() + "\n" + clocks.to_csv());
  return 0;
}

pf::BatteryOptions battery_options(const pf::ExperimentConfig& cfg) {
  pf::BatteryOptions opts;
  opts.seed = cfg.sub_seed("verify");
  if (cfg.has("verify")) {
    const nlohmann::json& v = cfg.section("verify");
    pf::reject_unknown_keys(v,
                            {"experiments", "seed", "lrp_moment_replicas", "grg_moment_replicas",
                             "grg_saw_replicas", "grg_saw_batches", "oracle_replicas",
                             "percolation_replicas", "convergence_seeds",
                             "trail_growth_replicas"},
                            "verify");
    if (v.contains("seed")) opts.seed = v["seed"].get<std::uint64_t>();
    auto get = [&](const char* key, int& slot) {
      if (v.contains(key)) slot = v[key].get<int>();
    };
    get("lrp_moment_replicas", opts.lrp_moment_replicas);
    get("grg_moment_replicas", opts.grg_moment_replicas);
    get("grg_saw_replicas", opts.grg_saw_replicas);
    get("grg_saw_batches", opts.grg_saw_batches);
    get("oracle_replicas", opts.oracle_replicas);
    get("percolation_replicas", opts.percolation_replicas);
    get("convergence_seeds", opts.convergence_seeds);
    get("trail_growth_replicas", opts.trail_growth_replicas);
  }
  return opts;
}

int cmd_verify(const CommonArgs& args) {
  pf::ExperimentConfig cfg = load_config(args);
  pf::BatteryOptions opts = battery_options(cfg);

  std::vector<std::string> selection{"bounds", "percolation", "convergence", "oracle"};
  if (!args.experiment.empty()) {
    selection = {args.experiment};
  } else if (cfg.has("verify") && cfg.section("verify").contains("experiments")) {
    selection.clear();
    for (const auto& e : cfg.section("verify")["experiments"]) {
      selection.push_back(e.get<std::string>());
    }
  }

  std::vector<pf::ExperimentReport> reports;
  for (const std::string& name : selection) {
    if (name == "bounds") {
      auto rs = pf::run_bounds_suite(opts);
      reports.insert(reports.end(), rs.begin(), rs.end());
    } else if (name == "oracle") {
      auto rs = pf::run_oracle_suite(opts);
      reports.insert(reports.end(), rs.begin(), rs.end());
    } else if (name == "percolation") {
      reports.push_back(pf::run_percolation_battery(opts));
    } else if (name == "convergence") {
      reports.push_back(pf::run_convergence_battery(opts));
    } else {
      std::cerr << "unknown experiment \"" << name << "\"\n";
      return 2;
    }
  }

  std::string table = pf::render_report_table(reports);
  std::cout << table;
  write_file(fs::path(cfg.output_dir()) / "verify_report.json",
             pf::reports_to_json(reports).dump(2) + "\n");
  write_file(fs::path(cfg.output_dir()) / "verify_report.txt", table);

  for (const auto& r : reports) {
    if (!r.pass()) return 1;
  }
  return 0;
}

int cmd_plot_data(const CommonArgs& args) {
  pf::ExperimentConfig cfg = load_config(args);
  pf::BatteryOptions opts = battery_options(cfg);
  if (cfg.has("plot_data")) {
    const nlohmann::json& p = cfg.section("plot_data");
    pf::reject_unknown_keys(p, {"percolation_replicas", "oracle_replicas", "trail_n_max"},
                            "plot_data");
    if (p.contains("percolation_replicas")) {
      opts.percolation_replicas = p["percolation_replicas"].get<int>();
    }
    if (p.contains("oracle_replicas")) opts.oracle_replicas = p["oracle_replicas"].get<int>();
  }

  // Tail decay curve.
  {
    pf::ExperimentReport rep = pf::run_percolation_battery(opts);
    std::ostringstream csv;
    csv << "n,horizon,forward_freq,reverse_freq,reference\n";
    csv.precision(17);
    for (const auto& row : rep.data["curve"]) {
      csv << row["n"].get<int>() << ',' << row["horizon"].get<double>() << ','
          << row["forward"].get<double>() << ',' << row["reverse"].get<double>() << ','
          << row["reference_2^-n"].get<double>() << '\n';
    }
    write_file(fs::path(cfg.output_dir()) / "decay.csv", csv.str());
  }

  // Trail ratios on the configured graph/model.
  if (cfg.has("graph") && cfg.has("model")) {
    auto built = cfg.build_graph();
    auto kernel = cfg.build_model();
    std::vector<double> rates = pf::rate_profile(built.graph, *kernel);
    int n_max = 6;
    if (cfg.has("plot_data") && cfg.section("plot_data").contains("trail_n_max")) {
      n_max = cfg.section("plot_data")["trail_n_max"].get<int>();
    }
    pf::TrailTable t = pf::trail_table(built.graph, rates, built.center, n_max);
    std::ostringstream csv;
    csv << "n,theta_simple,theta_double,theta_double_ratio\n";
    csv.precision(17);
    for (int n = 2; n <= t.n_max; ++n) {
      double ratio = n > 2 && t.theta_double_at(n - 1) > 0.0
                         ? t.theta_double_at(n) / t.theta_double_at(n - 1)
                         : 0.0;
      csv << n << ',' << t.theta_simple_at(n) << ',' << t.theta_double_at(n) << ',' << ratio
          << '\n';
    }
    write_file(fs::path(cfg.output_dir()) / "trail_ratios.csv", csv.str());
  }

  // Oracle total-variation distances.
  {
    auto reports = pf::run_oracle_suite(opts);
    std::ostringstream csv;
    csv << "experiment,tv_distance\n";
    csv.precision(17);
    for (const auto& rep : reports) {
      for (const auto& c : rep.checks) {
        if (c.name == "tv_distance") csv << rep.id << ',' << c.measured << '\n';
      }
    }
    write_file(fs::path(cfg.output_dir()) / "tv.csv", csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interacting particle systems on finite graph windows"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool with_experiment = false) {
    sub->add_option("--config", args.config_path, "Experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_dir, "Output directory (overrides config)");
    sub->add_option("--seed", args.seed, "Master seed (overrides config)");
    sub->add_option("--workers", args.workers, "Worker threads (0 = all cores)");
    if (with_experiment) {
      sub->add_option("--experiment", args.experiment, "Run a single experiment suite");
    }
  };

  CLI::App* gen = app.add_subcommand("gen-graph", "Sample or load a graph and write graph.json");
  add_common(gen);
  CLI::App* trails = app.add_subcommand("trails", "Write jump-rate-trail tables as CSV");
  add_common(trails);
  CLI::App* simulate = app.add_subcommand("simulate", "Run one trajectory and write JSONL");
  add_common(simulate);
  CLI::App* verify = app.add_subcommand("verify", "Run verification suites and write reports");
  add_common(verify, true);
  CLI::App* plot = app.add_subcommand("plot-data", "Write plot-ready CSV series");
  add_common(plot);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_graph(args);
    if (trails->parsed()) return cmd_trails(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (verify->parsed()) return cmd_verify(args);
    if (plot->parsed()) return cmd_plot_data(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
