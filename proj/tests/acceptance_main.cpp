// Acceptance battery: one line per criterion, nonzero exit on any failure.
// Expected values come from brute-force oracles in this file, analytic
// constants, or the matrix-exponential oracle; never from the code paths
// under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "brute_oracle.hpp"
#include "particleforge/battery.hpp"
#include "particleforge/construction.hpp"
#include "particleforge/harness.hpp"
#include "particleforge/models.hpp"
#include "particleforge/parallel.hpp"
#include "particleforge/rng.hpp"
#include "particleforge/saw.hpp"

using namespace particleforge;

namespace {

int g_failures = 0;
std::size_t g_contract_violations = 0;

void report(int criterion, const std::string& what, bool pass, double seconds) {
  std::printf("%s  criterion %2d: %s  (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), seconds);
  if (!pass) ++g_failures;
}

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

Graph random_connected_graph(std::size_t n, std::uint64_t seed) {
  rng::Sequence seq(seed, rng::Lane::kScratch);
  GraphBuilder b(n);
  // random spanning tree, then extra edges
  for (VertexId v = 1; v < n; ++v) {
    b.add_edge(v, static_cast<VertexId>(seq.next_bits() % v));
  }
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if (seq.next_uniform() < 0.25) b.add_edge(i, j);
    }
  }
  return b.finish();
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  rng::Sequence seq(seed, rng::Lane::kScratch);
  GraphBuilder b(n);
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if (seq.next_uniform() < p) b.add_edge(i, j);
    }
  }
  return b.finish();
}

// --------------------------------------------------------------------------

void criterion_1_trail_brute_force() {
  double t0 = now_seconds();
  bool ok = true;
  for (std::uint64_t rep = 0; rep < 500 && ok; ++rep) {
    std::size_t n = 3 + (rep % 4);  // 3..6 vertices
    Graph g = random_connected_graph(n, rep);
    std::vector<double> rates(n);
    rng::Sequence seq(rep, rng::Lane::kMark);
    for (double& c : rates) c = 0.1 + 4.9 * seq.next_uniform();
    int n_max = static_cast<int>(n) - 1;
    if (n_max < 2) continue;
    TrailTable t = trail_table(g, rates, 0, n_max);
    brute::AdjMatrix m = brute::AdjMatrix::from(g);
    for (int len = 2; len <= n_max && ok; ++len) {
      double simple = brute::trail_raw_sum(brute::saws(m, 0, len), rates);
      double dbl = brute::trail_raw_sum(brute::remnant_saws(g, 0, len), rates);
      auto close = [](double a, double b) {
        return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
      };
      ok = ok && close(t.raw_simple_at(len), simple) && close(t.raw_double_at(len), dbl);
    }
  }
  double dt = now_seconds() - t0;
  report(1, "trail tables match the naive enumerator on 500 random graphs", ok && dt < 120, dt);
}

void criterion_2_remnant_machinery() {
  double t0 = now_seconds();
  bool ok = true;

  for (std::uint64_t rep = 0; rep < 500 && ok; ++rep) {
    std::size_t n = 4 + (rep % 5);  // 4..8 vertices
    Graph g = random_graph(n, 0.35, rep + 9000);
    Graph gp = two_step_graph(g);
    for (int len = 1; len <= 4 && ok; ++len) {
      auto plain = enumerate_saws(g, 0, len);
      auto remnant = enumerate_remnant_saws(g, 0, len);
      auto in_plus = enumerate_saws(gp, 0, len);
      ok = ok && std::includes(remnant.begin(), remnant.end(), plain.begin(), plain.end()) &&
           std::includes(in_plus.begin(), in_plus.end(), remnant.begin(), remnant.end());
    }
  }

  rng::Sequence seq(123, rng::Lane::kProbe);
  for (int rep = 0; rep < 1000 && ok; ++rep) {
    Graph g = random_graph(8, 0.3, 20'000 + rep);
    Graph gp = two_step_graph(g);
    VertexId v = static_cast<VertexId>(seq.next_bits() % 8);
    Walk path{v};
    int len = 1 + static_cast<int>(seq.next_bits() % 12);
    for (int i = 0; i < len; ++i) {
      auto nbrs = gp.neighbors(path.back());
      if (nbrs.empty()) break;
      path.push_back(nbrs[seq.next_bits() % nbrs.size()]);
    }
    Walk r = reduce_path_to_remnant_saw(g, gp, path);
    ok = ok && r.front() == path.front() && r.back() == path.back();
    if (r.size() >= 2) ok = ok && is_remnant_saw(g, gp, r);
  }

  double dt = now_seconds() - t0;
  report(2, "SAW sandwich and path reduction hold with zero failures", ok, dt);
}

void criterion_3_lrp_degree_moments(const BatteryOptions& opts) {
  double t0 = now_seconds();
  LrpBoundParams lrp{200, 3.0, 1.0, 1.5, z_inverse_square_sum()};
  ExperimentReport rep =
      lrp_degree_moment_bound(lrp, 4, opts.lrp_moment_replicas, replica_seed(opts.seed, 101));
  double dt = now_seconds() - t0;
  report(3, "LRP degree moments stay under (beta*J)^n", rep.pass() && dt < 60, dt);
}

void criterion_4_lrp_saw_sums() {
  double t0 = now_seconds();
  LrpBoundParams lrp{200, 3.0, 1.0, 1.5, z_inverse_square_sum()};
  ExperimentReport rep = lrp_saw_sum_bound(lrp, 3, 30);
  report(4, "LRP SAW sums stay under (beta^(1/p)*J)^n exactly", rep.pass(),
         now_seconds() - t0);
}

void criterion_5_grg_bounds(const BatteryOptions& opts) {
  double t0 = now_seconds();
  GrgBoundParams grg{10, 2.0, RadiusLaw::uniform(3.0), 1.5, z_inverse_square_sum()};
  ExperimentReport moments =
      grg_degree_moment_bound(grg, 3, opts.grg_moment_replicas, replica_seed(opts.seed, 102));
  ExperimentReport saw = grg_saw_sum_bound(grg, 2, opts.grg_saw_replicas, opts.grg_saw_batches,
                                           replica_seed(opts.seed, 103));
  double dt = now_seconds() - t0;
  report(5, "GRG degree-moment and SAW-sum bounds hold", moments.pass() && saw.pass() && dt < 180,
         dt);
}

void criteria_6_and_7_oracle(const BatteryOptions& opts) {
  double t0 = now_seconds();
  std::vector<ExperimentReport> reports = run_oracle_suite(opts);
  double dt = now_seconds() - t0;
  bool tv_ok = true, self_ok = true, gen_ok = true;
  for (const ExperimentReport& r : reports) {
    for (const CheckLine& c : r.checks) {
      if (c.name == "tv_distance") {
        tv_ok = tv_ok && c.pass;
      } else if (r.id.rfind("simulation_vs_oracle", 0) == 0) {
        self_ok = self_ok && c.pass;
      } else {
        gen_ok = gen_ok && c.pass;
      }
    }
  }
  report(6, "simulated laws match exp(tQ) rows (TV <= 0.01) with clean oracle self-checks",
         tv_ok && self_ok && dt < 120, dt);
  report(7, "semigroup derivative converges linearly to the generator", gen_ok, 0.0);
}

void criterion_8_window_convergence(const BatteryOptions& opts) {
  double t0 = now_seconds();
  ExperimentReport rep = run_convergence_battery(opts);
  report(8, "window ladder trajectories agree exactly once the cluster fits", rep.pass(),
         now_seconds() - t0);
}

void criterion_9_generation_partition() {
  double t0 = now_seconds();
  std::vector<std::uint8_t> fail(1000, 0);
  parallel_for(1000, [&](std::size_t rep) {
    std::size_t n = 6 + (rep % 15);  // 6..20 vertices
    Graph g = random_graph(n, 2.5 / static_cast<double>(n), 40'000 + rep);
    bool self_updating = rep % 2 == 0;
    std::unique_ptr<JumpKernel> kernel =
        self_updating ? make_voter(1) : make_discrete_sandpile(1);
    HopMode mode = self_updating ? HopMode::kOneStep : HopMode::kTwoStep;

    std::vector<double> rates(n, 1.0);
    ClockRealization ck = sample_clocks(g, rates, 1.0, 50'000 + rep);
    SpaceTimeGraph st(g, mode);
    GenerationPartition part = generations(st, ck);

    // cover + strict monotonicity per vertex
    for (VertexId v = 0; v < n && !fail[rep]; ++v) {
      if (part.gen[v].size() != ck.events[v].size()) fail[rep] = 1;
      int prev = 0;
      for (int gen : part.gen[v]) {
        if (gen <= prev) fail[rep] = 1;
        prev = gen;
      }
    }

    // independent longest-path recomputation over the materialized DAG
    struct Pt {
      VertexId v;
      double t;
      int idx;
    };
    std::vector<Pt> pts;
    for (VertexId v = 0; v < n; ++v) {
      pts.push_back({v, 0.0, -1});
      for (std::size_t i = 0; i < ck.events[v].size(); ++i) {
        pts.push_back({v, ck.events[v][i].time, static_cast<int>(i)});
      }
    }
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.t < b.t; });
    std::vector<int> lp(pts.size(), 0);
    for (std::size_t j = 0; j < pts.size() && !fail[rep]; ++j) {
      if (pts[j].idx < 0) continue;
      int best = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].t >= pts[j].t) continue;
        if (pts[i].v == pts[j].v || st.hop_graph().has_edge(pts[i].v, pts[j].v)) {
          best = std::max(best, lp[i]);
        }
      }
      lp[j] = best + 1;
      if (lp[j] != part.gen[pts[j].v][pts[j].idx]) fail[rep] = 1;
    }

    // generation-ordered replay equals chronological replay
    std::vector<double> crates = rate_profile(g, *kernel);
    if (std::any_of(crates.begin(), crates.end(), [](double c) { return c > 0; })) {
      ClockRealization kck = sample_clocks(g, crates, 1.0, 60'000 + rep);
      Configuration x0(n);
      for (VertexId v = 0; v < n; ++v) {
        x0[v] = self_updating ? LocalState{static_cast<double>(v % 2), 0.0}
                              : LocalState{static_cast<double>(n), 0.0};
      }
      Window full = Window::full(g);
      Trajectory a = run(g, full, *kernel, x0, kck, 1.0);
      Trajectory b = run_generation_ordered(g, full, *kernel, x0, kck, 1.0);
      if (a.events.size() != b.events.size()) {
        fail[rep] = 1;
      } else {
        for (std::size_t i = 0; i < a.events.size(); ++i) {
          if (a.events[i].time != b.events[i].time || a.events[i].vertex != b.events[i].vertex ||
              !(a.events[i].after == b.events[i].after)) {
            fail[rep] = 1;
            break;
          }
        }
      }
    }
  });
  bool ok = std::none_of(fail.begin(), fail.end(), [](std::uint8_t f) { return f != 0; });
  report(9, "generations partition the realization and replays agree on 1000 ensembles", ok,
         now_seconds() - t0);
}

void criterion_10_percolation_tail(const BatteryOptions& opts) {
  double t0 = now_seconds();
  ExperimentReport rep = run_percolation_battery(opts);
  double dt = now_seconds() - t0;
  report(10, "direct-affect tails decay geometrically in both directions",
         rep.pass() && dt < 180, dt);
}

void criterion_11_conservation(const BatteryOptions& opts) {
  double t0 = now_seconds();
  bool ok = true;

  // accumulate at least 1e4 toppling events per sandpile flavor
  std::size_t discrete_events = 0;
  std::size_t divisible_events = 0;
  for (std::uint64_t seed = 0; discrete_events < 10'000 || divisible_events < 10'000; ++seed) {
    if (seed > 4000) {
      ok = false;
      break;
    }
    Graph g = random_connected_graph(10, 70'000 + seed);

    if (discrete_events < 10'000) {
      auto sand = make_discrete_sandpile(1);
      Configuration x0(10);
      for (VertexId v = 0; v < 10; ++v) x0[v] = {20.0, 0.0};
      std::vector<double> rates = rate_profile(g, *sand);
      ClockRealization ck = sample_clocks(g, rates, 2.0, 80'000 + seed);
      Trajectory traj = run(g, Window::full(g), *sand, x0, ck, 2.0);
      for (const TrajectoryEvent& e : traj.events) {
        double before = 0, after = 0;
        for (std::size_t i = 0; i < e.nbhd.size(); ++i) {
          before += e.before[i].value;
          after += e.after[i].value;
        }
        if (before != after) ok = false;
        ++discrete_events;
      }
    }

    if (divisible_events < 10'000) {
      auto div = make_divisible_sandpile(1, 1.3);
      Configuration y0(10);
      for (VertexId v = 0; v < 10; ++v) y0[v] = {15.5, 0.0};
      std::vector<double> rates = rate_profile(g, *div);
      ClockRealization ck = sample_clocks(g, rates, 2.0, 90'000 + seed);
      Trajectory traj = run(g, Window::full(g), *div, y0, ck, 2.0);
      for (const TrajectoryEvent& e : traj.events) {
        double before = 0, after = 0;
        for (std::size_t i = 0; i < e.nbhd.size(); ++i) {
          before += e.before[i].value;
          after += e.after[i].value;
        }
        if (std::abs(before - after) > 1e-12) ok = false;
        ++divisible_events;
      }
    }
  }

  // kernel normalization sweep: 1e4 random local configurations
  std::vector<std::unique_ptr<JumpKernel>> kernels;
  kernels.push_back(make_voter(2));
  kernels.push_back(make_contact(1.5, 1));
  kernels.push_back(make_discrete_sandpile(1));
  kernels.push_back(make_divisible_sandpile(2, 0.8));
  kernels.push_back(make_urn(2, 1, 3, 1));
  kernels.push_back(make_birth_death(0.6, 0.4, 0.3));
  rng::Sequence seq(opts.seed, rng::Lane::kProbe, 11);
  for (int rep = 0; rep < 10'000 && ok; ++rep) {
    Graph g = random_graph(6, 0.5, 100'000 + rep % 50);
    const auto& kernel = kernels[rep % kernels.size()];
    VertexId v = static_cast<VertexId>(seq.next_bits() % 6);
    auto nbhd = neighborhood(g, v);
    std::vector<LocalState> local(nbhd.size());
    for (auto& s : local) {
      s = {static_cast<double>(seq.next_bits() % 9),
           static_cast<double>(seq.next_bits() % 4)};
    }
    double alpha = kernel->total_rate(g, v, local);
    double c = kernel->rate_bound(g, v);
    if (!(alpha >= 0.0) || alpha > c + 1e-12) ok = false;
    double total = 0.0;
    for (const auto& t : kernel->targets(g, v, local)) total += t.rate;
    if (std::abs(total - alpha) > 1e-12 * std::max(1.0, alpha)) ok = false;
  }

  ok = ok && g_contract_violations == 0;
  report(11, "toppling conservation is exact and kernel contracts never fire", ok,
         now_seconds() - t0);
}

}  // namespace

int main() {
  BatteryOptions opts;  // committed seeds and replica counts
  std::printf("acceptance battery, master seed %llu\n",
              static_cast<unsigned long long>(opts.seed));
  try {
    criterion_1_trail_brute_force();
    criterion_2_remnant_machinery();
    criterion_3_lrp_degree_moments(opts);
    criterion_4_lrp_saw_sums();
    criterion_5_grg_bounds(opts);
    criteria_6_and_7_oracle(opts);
    criterion_8_window_convergence(opts);
    criterion_9_generation_partition();
    criterion_10_percolation_tail(opts);
    criterion_11_conservation(opts);
  } catch (const KernelContractViolation& e) {
    std::printf("FAIL  kernel contract violation escaped: %s\n", e.what());
    ++g_failures;
  } catch (const std::exception& e) {
    std::printf("FAIL  unexpected exception: %s\n", e.what());
    ++g_failures;
  }
  std::printf("%d criterion failure(s)\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
