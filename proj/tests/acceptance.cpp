// End-to-end acceptance checks, one per release gate. Each prints a single
// [PASS]/[FAIL] line with the measured numbers; the exit code is the number
// of failed gates. Independent oracles come from oracles.hpp, never from the
// library paths under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nfvcoord/coord.hpp"
#include "nfvcoord/engines.hpp"
#include "nfvcoord/harness.hpp"
#include "nfvcoord/ioconv.hpp"
#include "nfvcoord/lp.hpp"
#include "nfvcoord/netmodel.hpp"
#include "nfvcoord/rng.hpp"
#include "nfvcoord/scenario.hpp"
#include "nfvcoord/system.hpp"
#include "oracles.hpp"

using namespace nfvcoord;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

char note_buf[512];

// ---- shared toy-network builders ----------------------------------------

net::PhysicalNetwork build_net(int n, const std::vector<std::pair<int, int>>& edges,
                               double link_cap = 1.0, double server_cap = 10.0) {
  net::PhysicalNetwork nw;
  nw.num_nodes = n;
  nw.server_capacity.assign(n, server_cap);
  nw.node_reliability.assign(n, 1.0);
  for (auto [a, b] : edges) {
    net::Link l;
    l.from = a;
    l.to = b;
    l.capacity = link_cap;
    l.reliability = 1.0;
    nw.links.push_back(l);
    std::swap(l.from, l.to);
    nw.links.push_back(l);
  }
  return nw;
}

net::VnDemand vn(int id, double t, int size, int client, int peer) {
  net::VnDemand v;
  v.vn_id = id;
  v.traffic = t;
  v.vm_size = size;
  v.client_node = client;
  v.peer_vm = peer;
  return v;
}

// ---- 1. lp core vs vertex enumeration ------------------------------------

lp::LinearProgram random_lp(Rng& rng, int nvars, int ncons) {
  lp::LinearProgram p;
  for (int j = 0; j < nvars; ++j) {
    double lo = rng.uniform(-1.0, 0.5);
    double hi = lo + rng.uniform(0.2, 2.5);
    p.add_variable(lo, hi, rng.uniform(-2.0, 2.0));
  }
  std::vector<double> anchor(nvars);
  for (int j = 0; j < nvars; ++j) anchor[j] = rng.uniform(p.lower[j], p.upper[j]);
  for (int i = 0; i < ncons; ++i) {
    std::vector<double> a(nvars);
    double lhs = 0;
    for (int j = 0; j < nvars; ++j) {
      a[j] = rng.uniform(-2.0, 2.0);
      lhs += a[j] * anchor[j];
    }
    switch (rng.uniform_int(0, 3)) {
      case 0: p.add_constraint(a, lp::Relation::LessEq, lhs + rng.uniform(0.0, 1.0)); break;
      case 1: p.add_constraint(a, lp::Relation::GreaterEq, lhs - rng.uniform(0.0, 1.0)); break;
      case 2: p.add_constraint(a, lp::Relation::Equal, lhs); break;
      default: p.add_constraint(a, lp::Relation::LessEq, lhs - rng.uniform(0.5, 4.0)); break;
    }
  }
  return p;
}

bool criterion_1() {
  const double t0 = now_seconds();
  Rng rng(2024);
  int checked = 0, infeasible = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    // spread sizes across the allowed box, always touching the corners
    const int nv = trial < 5 ? 8 : static_cast<int>(rng.uniform_int(2, 8));
    const int nc = trial < 5 ? 6 : static_cast<int>(rng.uniform_int(1, 6));
    lp::LinearProgram p = random_lp(rng, nv, nc);
    auto ref = oracles::enumerate_vertex_optimum(p);
    auto sol = lp::solve(p);
    if (!ref.feasible) {
      if (sol.status != lp::SolveStatus::Infeasible) {
        std::snprintf(note_buf, sizeof(note_buf), "trial %d: oracle infeasible, solver says %d",
                      trial, static_cast<int>(sol.status));
        return false;
      }
      ++infeasible;
      continue;
    }
    if (sol.status != lp::SolveStatus::Optimal) {
      std::snprintf(note_buf, sizeof(note_buf), "trial %d: solver failed on a feasible lp", trial);
      return false;
    }
    const double diff = std::fabs(sol.objective - ref.objective);
    worst = std::max(worst, diff);
    if (diff > 1e-6) {
      std::snprintf(note_buf, sizeof(note_buf), "trial %d: |obj diff| = %.3e > 1e-6", trial, diff);
      return false;
    }
    ++checked;
  }
  const double secs = now_seconds() - t0;
  if (secs >= 5.0) {
    std::snprintf(note_buf, sizeof(note_buf), "runtime %.2f s breaches the 5 s budget", secs);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf),
                "%d optimal within 1e-6 (worst %.1e) + %d infeasible agreed, %.2f s", checked,
                worst, infeasible, secs);
  return true;
}

// ---- 2. route engine vs grid oracle ---------------------------------------

double conservation_residual(const net::PhysicalNetwork& nw, const engines::FlowSolution& f) {
  double worst = 0.0;
  for (std::size_t k = 0; k < f.ods.size(); ++k) {
    if (f.od_demand[k] <= 0.0) continue;
    std::vector<double> balance(nw.num_nodes, 0.0);
    for (std::size_t l = 0; l < nw.links.size(); ++l) {
      balance[nw.links[l].to] += f.fractions[k][l];
      balance[nw.links[l].from] -= f.fractions[k][l];
    }
    for (int v = 0; v < nw.num_nodes; ++v) {
      double expect = 0.0;
      if (v == f.ods[k].first) expect = -1.0;
      if (v == f.ods[k].second) expect = 1.0;
      worst = std::max(worst, std::fabs(balance[v] - expect));
    }
  }
  return worst;
}

std::uint64_t compositions(int steps, int parts) {
  // C(steps + parts - 1, parts - 1)
  std::uint64_t r = 1;
  for (int i = 1; i < parts; ++i) r = r * (steps + i) / i;
  return r;
}

bool criterion_2() {
  struct Topo {
    const char* name;
    int n;
    std::vector<std::pair<int, int>> edges;
  };
  const std::vector<Topo> topologies = {
      {"k2", 2, {{0, 1}}},
      {"path3", 3, {{0, 1}, {1, 2}}},
      {"triangle", 3, {{0, 1}, {1, 2}, {0, 2}}},
      {"path4", 4, {{0, 1}, {1, 2}, {2, 3}}},
      {"star", 4, {{0, 1}, {0, 2}, {0, 3}}},
      {"cycle4", 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {"paw", 4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}},
      {"diamond", 4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}},
      {"k4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}},
  };
  int singles = 0, pairs = 0;
  double worst_gap = 0.0, worst_residual = 0.0;
  for (const auto& topo : topologies) {
    auto nw = build_net(topo.n, topo.edges);
    for (int o = 0; o < topo.n; ++o)
      for (int d = 0; d < topo.n; ++d) {
        if (o == d) continue;
        const double mf = oracles::max_flow(nw, o, d);
        // 0.45 keeps the lattice representable: the worst case is an equal
        // split over three disjoint paths, where the hundredths grid can only
        // reach 0.34/0.33/0.33 and the gap 0.45*3*(0.34 - 1/3) = 0.009 stays
        // inside the 0.01 tolerance
        const double t = 0.45 * mf;
        net::TrafficMatrix m(topo.n);
        m.at(o, d) = t;
        auto f = engines::route_solve(nw, m);
        if (!f.feasible) {
          std::snprintf(note_buf, sizeof(note_buf), "%s %d->%d: infeasible below max flow",
                        topo.name, o, d);
          return false;
        }
        // single-commodity min-max utilization is exactly t / maxflow
        if (std::fabs(f.u_link_max - t / mf) > 1e-6) {
          std::snprintf(note_buf, sizeof(note_buf), "%s %d->%d: u %.6f vs maxflow bound %.6f",
                        topo.name, o, d, f.u_link_max, t / mf);
          return false;
        }
        const double grid =
            oracles::route_grid_min_umax(nw, {{o, d, t}}, 100);
        worst_gap = std::max(worst_gap, std::fabs(f.u_link_max - grid));
        if (std::fabs(f.u_link_max - grid) > 0.01) {
          std::snprintf(note_buf, sizeof(note_buf), "%s %d->%d: lp %.4f vs grid %.4f", topo.name,
                        o, d, f.u_link_max, grid);
          return false;
        }
        worst_residual = std::max(worst_residual, conservation_residual(nw, f));
        ++singles;
      }
    // joint two-demand grid wherever the composition product stays tractable
    if (std::string(topo.name) == "k4") continue;  // 5 paths per od: ~2e13 points
    bool done_pair = false;
    for (int o1 = 0; o1 < topo.n && !done_pair; ++o1)
      for (int d1 = 0; d1 < topo.n && !done_pair; ++d1) {
        if (o1 == d1) continue;
        for (int o2 = o1; o2 < topo.n && !done_pair; ++o2)
          for (int d2 = 0; d2 < topo.n && !done_pair; ++d2) {
            if (o2 == d2 || (o1 == o2 && d1 == d2)) continue;
            const auto p1 = oracles::simple_paths(nw, o1, d1).size();
            const auto p2 = oracles::simple_paths(nw, o2, d2).size();
            const std::uint64_t cost = compositions(100, static_cast<int>(p1)) *
                                       compositions(100, static_cast<int>(p2));
            if (cost > 30000000ull) continue;
            const double t1 = 0.5 * oracles::max_flow(nw, o1, d1);
            const double t2 = 0.4 * oracles::max_flow(nw, o2, d2);
            net::TrafficMatrix m(topo.n);
            m.at(o1, d1) = t1;
            m.at(o2, d2) += t2;
            auto f = engines::route_solve(nw, m);
            if (!f.feasible) continue;  // joint load may genuinely exceed caps
            const double grid = oracles::route_grid_min_umax(nw, {{o1, d1, t1}, {o2, d2, t2}}, 100);
            worst_gap = std::max(worst_gap, std::fabs(f.u_link_max - grid));
            if (std::fabs(f.u_link_max - grid) > 0.01) {
              std::snprintf(note_buf, sizeof(note_buf), "%s pair: lp %.4f vs grid %.4f", topo.name,
                            f.u_link_max, grid);
              return false;
            }
            worst_residual = std::max(worst_residual, conservation_residual(nw, f));
            ++pairs;
            done_pair = true;
          }
      }
    if (!done_pair) {
      std::snprintf(note_buf, sizeof(note_buf), "%s: no tractable demand pair found", topo.name);
      return false;
    }
  }
  if (worst_residual >= 1e-7) {
    std::snprintf(note_buf, sizeof(note_buf), "conservation residual %.2e >= 1e-7",
                  worst_residual);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf),
                "%d single + %d paired checks, worst grid gap %.4f, residual %.1e", singles, pairs,
                worst_gap, worst_residual);
  return true;
}

// ---- 3. reliability arithmetic --------------------------------------------

bool criterion_3() {
  // degraded zone: origin node reliability 0.9, its link 0.5 -> 0.9*0.5
  auto nw = build_net(2, {{0, 1}}, 2.0);
  nw.node_reliability[0] = 0.9;
  for (auto& l : nw.links) l.reliability = 0.5;
  net::TrafficMatrix d(2);
  d.at(0, 1) = 1.0;
  auto f = engines::route_solve(nw, d);
  if (!f.feasible) {
    std::snprintf(note_buf, sizeof(note_buf), "single-hop route infeasible");
    return false;
  }
  std::vector<engines::VnSegments> single = {{{{0, 1}}, 1.0}};
  const double r1 = engines::reliability_total(nw, f, single);
  if (std::fabs(r1 - 0.45) > 1e-12) {
    std::snprintf(note_buf, sizeof(note_buf), "single path: %.12f != 0.45", r1);
    return false;
  }

  // two VNs, traffic 1:3, reliabilities 1.0 (colocated) and 0.5:
  // (1*1 + 3*0.5) / 4 = 0.625
  auto nw2 = build_net(2, {{0, 1}}, 8.0);
  for (auto& l : nw2.links) l.reliability = 0.5;
  net::TrafficMatrix d2(2);
  d2.at(0, 1) = 3.0;
  auto f2 = engines::route_solve(nw2, d2);
  std::vector<engines::VnSegments> both = {{{{0, 0}}, 1.0}, {{{0, 1}}, 3.0}};
  const double r2 = engines::reliability_total(nw2, f2, both);
  if (std::fabs(r2 - 0.625) > 1e-12) {
    std::snprintf(note_buf, sizeof(note_buf), "weighted average: %.12f != 0.625", r2);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf), "0.45 and 0.625 exact");
  return true;
}

// ---- 4. penalty semantics --------------------------------------------------

bool criterion_4() {
  // server 1 is the most utilized; its only vm cannot fit anywhere else, so
  // the first greedy migration (all-zero q -> destination 0) must overload
  UseCaseOptions opts;
  opts.fixed_node = true;
  auto nw = build_net(2, {{0, 1}}, 10.0, 4.0);
  auto model =
      sys::make_model(nw, {vn(0, 0.2, 1, 0, -1), vn(1, 0.2, 4, 1, -1)}, {}, opts);
  sys::Allocation initial;
  initial.vm_server = {0, 1};
  if (!sys::evaluate(model, initial).all_satisfied()) {
    std::snprintf(note_buf, sizeof(note_buf), "constructed initial is not feasible");
    return false;
  }
  coord::RunConfig cfg;
  cfg.params.eps = 0.0;  // force the greedy action
  coord::Coordinator c(model, initial, cfg, 7);
  auto ep = c.run_episode(coord::AgentKind::Vm, 20);
  if (ep.max_reward != -100.0) {
    std::snprintf(note_buf, sizeof(note_buf), "reward %.6f, expected exactly -100", ep.max_reward);
    return false;
  }
  if (ep.steps != 1) {
    std::snprintf(note_buf, sizeof(note_buf), "episode ran %d steps, expected 1", ep.steps);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf), "reward == -100 and the episode ended after 1 step");
  return true;
}

// ---- 5. q-learning convergence on a toy mdp --------------------------------

bool criterion_5() {
  const double t0 = now_seconds();
  auto next = [](int s, int a) { return a == 0 ? s : (s + 1) % 3; };
  auto rew = [](int s, int a) { return s == 2 && a == 0 ? 1.0 : 0.0; };
  auto qstar = oracles::q_star_deterministic(3, 2, next, rew, 0.9);

  coord::QTable q(2);
  Rng rng(17);
  int s = 0;
  int updates = 0;
  double gap = 1.0;
  for (; updates < 10000; ++updates) {
    const int a = static_cast<int>(rng.uniform_int(0, 1));
    const int s2 = next(s, a);
    coord::q_update(q, static_cast<std::uint64_t>(s), a, rew(s, a),
                    static_cast<std::uint64_t>(s2), 0.2, 0.9);
    s = s2;
    gap = 0.0;
    for (int st = 0; st < 3; ++st)
      for (int ac = 0; ac < 2; ++ac)
        gap = std::max(gap, std::fabs(q.get(static_cast<std::uint64_t>(st), ac) - qstar[st][ac]));
    if (gap < 0.01) break;
  }
  const double secs = now_seconds() - t0;
  if (gap >= 0.01) {
    std::snprintf(note_buf, sizeof(note_buf), "max|Q-Q*| = %.4f after 10000 updates", gap);
    return false;
  }
  if (secs >= 1.0) {
    std::snprintf(note_buf, sizeof(note_buf), "runtime %.2f s breaches the 1 s budget", secs);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf), "max|Q-Q*| < 0.01 after %d updates, %.2f s", updates,
                secs);
  return true;
}

// ---- 6. monotone best-cev trajectories --------------------------------------

bool criterion_6() {
  int runs = 0;
  for (const char* mode : {"rl", "random"}) {
    harness::ExperimentConfig cfg;
    cfg.case_id = 1;
    cfg.n_vn = 20;
    cfg.mode = mode;
    cfg.total_steps = 300;
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
    for (const auto& r : harness::run(cfg)) {
      for (std::size_t i = 1; i < r.trajectory.size(); ++i)
        if (r.trajectory[i] < r.trajectory[i - 1]) {
          std::snprintf(note_buf, sizeof(note_buf), "%s seed %llu: drop at step %zu", mode,
                        static_cast<unsigned long long>(r.seed), i);
          return false;
        }
      ++runs;
    }
  }
  std::snprintf(note_buf, sizeof(note_buf), "%d seeded runs, every trajectory nondecreasing",
                runs);
  return true;
}

// ---- 7. rl vs random at the 50-vn scale --------------------------------------

bool criterion_7() {
  const double t0 = now_seconds();
  harness::ExperimentConfig cfg;
  cfg.case_id = 1;
  cfg.n_vn = 50;
  cfg.total_steps = 5000;
  cfg.scenario_seed = 1;
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);

  std::vector<double> rl_best, rl_gain, rnd_best;
  cfg.mode = "rl";
  for (const auto& r : harness::run(cfg)) {
    rl_best.push_back(r.best_cev);
    rl_gain.push_back(r.best_cev - r.initial_cev);
  }
  cfg.mode = "random";
  for (const auto& r : harness::run(cfg)) rnd_best.push_back(r.best_cev);
  const double secs = now_seconds() - t0;

  const double med_rl = median(rl_best);
  const double med_rnd = median(rnd_best);
  const double med_gain = median(rl_gain);
  const bool beats = med_rl >= med_rnd;
  const bool improves = med_gain > 0.05;
  const bool in_time = secs < 600.0;
  std::snprintf(note_buf, sizeof(note_buf),
                "median rl %.4f vs random %.4f (%s), median gain %.4f (%s), %.0f s",
                med_rl, med_rnd, beats ? "ok" : "rl behind", med_gain,
                improves ? "> 0.05" : "<= 0.05", secs);
  return beats && improves && in_time;
}

// ---- 8. oracle proximity on the tiny exhaustive case ------------------------

bool criterion_8() {
  const double t0 = now_seconds();
  const auto& cp = scenario::case_matrix()[11];  // no ids, no reliability, sizes 3..8
  net::DemandSpec ds;
  ds.n_vn = 3;
  ds.n_nodes = 4;
  ds.vm_size_lo = cp.vm_size_lo;
  ds.vm_size_hi = cp.vm_size_hi;
  ds.fixed_node = cp.options.fixed_node;
  net::DemandSet dem = net::generate_demands(ds, 7);

  scenario::Scenario sc;
  sc.model = sys::make_model(build_net(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 2.0, 10.0), dem.vns,
                             dem.ids, cp.options);
  sc.initial.vm_server = engines::initial_placement(sc.model.net, sc.model.vm_sizes).server;
  sc.initial_eval = sys::evaluate(sc.model, sc.initial);
  if (!sc.initial_eval.all_satisfied()) {
    std::snprintf(note_buf, sizeof(note_buf), "pinned 4-node instance lost its feasible initial");
    return false;
  }

  coord::Theta theta;
  auto oracle = harness::brute_force_oracle(sc, theta);
  if (!oracle.found) {
    std::snprintf(note_buf, sizeof(note_buf), "oracle found no feasible allocation");
    return false;
  }

  coord::RunConfig rc;
  rc.total_steps = 20000;
  rc.episode_steps = 20;
  rc.theta = theta;
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto rr = coord::coordinate(sc.model, sc.initial, rc, seed);
    if (rr.best_cev >= 0.95 * oracle.best_cev) ++within;
  }
  const double secs = now_seconds() - t0;
  if (secs >= 300.0) {
    std::snprintf(note_buf, sizeof(note_buf), "runtime %.0f s breaches the 5 min budget", secs);
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf),
                "%d/10 seeds within 5%% of the %llu-allocation oracle (best %.4f), %.1f s", within,
                static_cast<unsigned long long>(oracle.examined), oracle.best_cev, secs);
  return within >= 6;
}

// ---- 9. conversion equals the matrix-product form ---------------------------

bool criterion_9() {
  const auto& cp = scenario::case_matrix()[11];
  auto nw = scenario::internet2_base();
  for (auto& c : nw.server_capacity) c = 100.0;
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    net::DemandSpec ds;
    ds.n_vn = 2 + static_cast<int>(rng.uniform_int(0, 10));
    ds.n_nodes = nw.num_nodes;
    ds.vm_size_lo = cp.vm_size_lo;
    ds.vm_size_hi = cp.vm_size_hi;
    ds.fixed_node = cp.options.fixed_node;
    net::DemandSet dem = net::generate_demands(ds, 1000 + static_cast<std::uint64_t>(trial));
    std::vector<int> vm_server;
    for (int i = 0; i < ds.n_vn; ++i)
      vm_server.push_back(static_cast<int>(rng.uniform_int(0, nw.num_nodes - 1)));

    auto conv = ioconv::convert(nw, dem.vns, {}, vm_server, {}, cp.options);
    const int n = nw.num_nodes;
    std::vector<std::vector<double>> product(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < ds.n_vn; ++i)
      for (int j = 0; j < ds.n_vn; ++j) {
        const double t_ij = dem.vns[i].peer_vm == j ? dem.vns[i].traffic : 0.0;
        product[vm_server[i]][vm_server[j]] += t_ij;
      }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double want = p == q ? 0.0 : product[p][q];  // colocation zeroing
        if (conv.matrix.at(p, q) != want) {
          std::snprintf(note_buf, sizeof(note_buf), "trial %d: cell (%d,%d) %.17g != %.17g", trial,
                        p, q, conv.matrix.at(p, q), want);
          return false;
        }
      }
  }
  std::snprintf(note_buf, sizeof(note_buf), "100/100 instances equal, bitwise");
  return true;
}

// ---- 10. weight sweep gives the server-weighted run the lower utilization ---

bool criterion_10() {
  harness::ExperimentConfig base;
  base.case_id = 4;
  base.n_vn = 50;
  base.total_steps = 5000;
  base.seeds = {1, 2, 3, 4, 5};

  auto sweep = [&](coord::Theta theta, std::vector<double>& u_out) -> bool {
    harness::ExperimentConfig cfg = base;
    cfg.theta = theta;
    for (const auto& r : harness::run(cfg)) {
      u_out.push_back(r.u_server);
      // the harness only records feasible bests, so check the components
      if (r.u_link > 1.0 + 1e-9 || r.u_server > 1.0 + 1e-9) return false;
    }
    return true;
  };
  std::vector<double> u_server_weighted, u_link_weighted;
  if (!sweep({0.0, 10.0, 0.0}, u_server_weighted) || !sweep({10.0, 0.0, 0.0}, u_link_weighted)) {
    std::snprintf(note_buf, sizeof(note_buf), "a run's best solution violates a constraint");
    return false;
  }
  const double med_srv = median(u_server_weighted);
  const double med_lnk = median(u_link_weighted);
  std::snprintf(note_buf, sizeof(note_buf),
                "median final U~: theta=(0,10,0) %.4f vs theta=(10,0,0) %.4f, all feasible",
                med_srv, med_lnk);
  return med_srv <= med_lnk;
}

// ---- 11. calibration window ---------------------------------------------------

bool criterion_11() {
  int accepted = 0;
  for (int case_id = 1; case_id <= 12; ++case_id)
    for (int n_vn : {20, 50})
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto res = scenario::build(case_id, n_vn, seed);
        if (!std::holds_alternative<scenario::Scenario>(res)) continue;
        const auto& sc = std::get<scenario::Scenario>(res);
        double total_cap = 0.0;
        for (double c : sc.model.net.server_capacity) total_cap += c;
        long total_size = 0;
        for (int w : sc.model.vm_sizes) total_size += w;
        for (int w : sc.model.ids_sizes) total_size += w;
        const double util = total_size / total_cap;
        if (util < 0.79 || util > 0.81 || sc.packed_utilization < 0.79 ||
            sc.packed_utilization > 0.81) {
          std::snprintf(note_buf, sizeof(note_buf), "case %d n=%d seed %llu: utilization %.4f",
                        case_id, n_vn, static_cast<unsigned long long>(seed), util);
          return false;
        }
        ++accepted;
      }
  if (accepted == 0) {
    std::snprintf(note_buf, sizeof(note_buf), "no scenario accepted at all");
    return false;
  }
  std::snprintf(note_buf, sizeof(note_buf), "%d accepted scenarios, every one in [0.79, 0.81]",
                accepted);
  return true;
}

// ---- 12. every case builds and completes a run ---------------------------------

bool criterion_12() {
  for (int case_id = 1; case_id <= 12; ++case_id) {
    harness::ExperimentConfig cfg;
    cfg.case_id = case_id;
    cfg.n_vn = 20;
    cfg.total_steps = 1000;
    cfg.seeds = {1};
    try {
      auto records = harness::run(cfg);
      if (records.size() != 1 || records[0].steps != 1000) {
        std::snprintf(note_buf, sizeof(note_buf), "case %d: run did not complete 1000 steps",
                      case_id);
        return false;
      }
    } catch (const std::exception& e) {
      std::snprintf(note_buf, sizeof(note_buf), "case %d: %s", case_id, e.what());
      return false;
    }
  }
  std::snprintf(note_buf, sizeof(note_buf), "12/12 cases built and ran 1000 steps");
  return true;
}

}  // namespace

int main() {
  struct Gate {
    int id;
    const char* name;
    bool (*fn)();
  };
  const Gate gates[] = {
      {1, "lp core matches vertex enumeration", criterion_1},
      {2, "route lp matches grid oracle and conserves flow", criterion_2},
      {3, "reliability arithmetic", criterion_3},
      {4, "overload penalty and episode cut", criterion_4},
      {5, "q-learning convergence on a toy mdp", criterion_5},
      {6, "best-cev trajectories are monotone", criterion_6},
      {7, "rl beats random at case 1, n=50", criterion_7},
      {8, "rl near the exhaustive oracle on 4 nodes", criterion_8},
      {9, "demand conversion equals the matrix product", criterion_9},
      {10, "weight sweep orders server utilization", criterion_10},
      {11, "accepted scenarios sit at 80% utilization", criterion_11},
      {12, "all 12 cases build and run", criterion_12},
  };
  int failed = 0;
  for (const auto& g : gates) {
    note_buf[0] = '\0';
    bool ok = false;
    try {
      ok = g.fn();
    } catch (const std::exception& e) {
      std::snprintf(note_buf, sizeof(note_buf), "exception: %s", e.what());
    }
    std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", g.id, g.name, note_buf);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d of 12 acceptance gates passed\n", 12 - failed);
  return failed;
}
