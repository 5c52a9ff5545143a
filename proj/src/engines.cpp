#include "nfvcoord/engines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nfvcoord/lp.hpp"

namespace nfvcoord::engines {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<int, int>> collect_ods(const net::TrafficMatrix& d) {
  std::vector<std::pair<int, int>> ods;
  for (int p = 0; p < d.n; ++p)
    for (int q = 0; q < d.n; ++q)
      if (p != q && d.at(p, q) > 0) ods.emplace_back(p, q);
  return ods;
}

double recompute_umax(const net::PhysicalNetwork& net, const FlowSolution& flow) {
  double u = 0;
  for (std::size_t e = 0; e < net.links.size(); ++e) {
    double load = 0;
    for (std::size_t k = 0; k < flow.ods.size(); ++k) load += flow.od_demand[k] * flow.fractions[k][e];
    u = std::max(u, load / net.links[e].capacity);
  }
  return u;
}

FlowSolution solve_per_od(const net::PhysicalNetwork& net, const net::TrafficMatrix& d,
                          bool want_fractions) {
  FlowSolution out;
  out.ods = collect_ods(d);
  for (auto [p, q] : out.ods) out.od_demand.push_back(d.at(p, q));
  const int E = static_cast<int>(net.links.size());
  const int K = static_cast<int>(out.ods.size());
  if (K == 0) {
    out.routable = out.feasible = true;
    return out;
  }
  lp::LinearProgram prog;
  for (int k = 0; k < K; ++k)
    for (int e = 0; e < E; ++e) prog.add_variable(0.0, 1.0, 0.0);
  const int uvar = prog.add_variable(0.0, lp::kInf, 1.0);
  auto xv = [E](int k, int e) { return k * E + e; };
  for (int k = 0; k < K; ++k) {
    auto [p, q] = out.ods[k];
    for (int i = 0; i < net.num_nodes; ++i) {
      if (i == q) continue;  // destination row is implied by the rest
      std::vector<double> row(prog.num_vars(), 0.0);
      for (int e = 0; e < E; ++e) {
        if (net.links[e].from == i) row[xv(k, e)] += 1.0;
        if (net.links[e].to == i) row[xv(k, e)] -= 1.0;
      }
      prog.add_constraint(row, lp::Relation::Equal, i == p ? 1.0 : 0.0);
    }
  }
  for (int e = 0; e < E; ++e) {
    std::vector<double> row(prog.num_vars(), 0.0);
    for (int k = 0; k < K; ++k) row[xv(k, e)] = out.od_demand[k];
    row[uvar] = -net.links[e].capacity;
    prog.add_constraint(row, lp::Relation::LessEq, 0.0);
  }
  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::SolveStatus::Optimal) return out;  // disconnected demand
  out.routable = true;
  out.fractions.assign(K, std::vector<double>(E, 0.0));
  for (int k = 0; k < K; ++k)
    for (int e = 0; e < E; ++e)
      out.fractions[k][e] = std::clamp(sol.values[xv(k, e)], 0.0, 1.0);
  out.u_link_max = recompute_umax(net, out);
  out.feasible = out.u_link_max <= 1.0 + 1e-9;
  if (!want_fractions) out.fractions.clear();
  return out;
}

// deterministic removal of directed cycles from one commodity's flow
void strip_cycles(const net::PhysicalNetwork& net, std::vector<double>& y, double eps) {
  const int n = net.num_nodes;
  const int E = static_cast<int>(y.size());
  for (;;) {
    // DFS over positive edges looking for a back edge
    std::vector<int> color(n, 0), parent_edge(n, -1);
    std::vector<int> cycle;
    std::vector<int> stack;
    for (int root = 0; root < n && cycle.empty(); ++root) {
      if (color[root] != 0) continue;
      stack.assign(1, root);
      // edge iterator state per node
      std::vector<int> next_edge(n, 0);
      color[root] = 1;
      while (!stack.empty() && cycle.empty()) {
        int u = stack.back();
        bool advanced = false;
        for (int e = next_edge[u]; e < E; ++e) {
          if (net.links[e].from != u || y[e] <= eps) continue;
          next_edge[u] = e + 1;
          int v = net.links[e].to;
          if (color[v] == 1) {
            // unwind the stack from v to u
            cycle.push_back(e);
            for (int w = u; w != v; w = net.links[parent_edge[w]].from)
              cycle.push_back(parent_edge[w]);
            advanced = true;
            break;
          }
          if (color[v] == 0) {
            color[v] = 1;
            parent_edge[v] = e;
            stack.push_back(v);
            advanced = true;
            break;
          }
        }
        if (!cycle.empty()) break;
        if (!advanced) {
          color[u] = 2;
          stack.pop_back();
        }
      }
    }
    if (cycle.empty()) return;
    double m = kInf;
    for (int e : cycle) m = std::min(m, y[e]);
    for (int e : cycle) y[e] = std::max(0.0, y[e] - m);
  }
}

struct WidestPath {
  std::vector<double> width;
  std::vector<int> parent_edge;
};

// max-min-residual path tree from src; ties keep the lowest-index relaxation
WidestPath widest_paths(const net::PhysicalNetwork& net, const std::vector<double>& y, int src,
                        double eps) {
  const int n = net.num_nodes;
  WidestPath w;
  w.width.assign(n, 0.0);
  w.parent_edge.assign(n, -1);
  w.width[src] = kInf;
  std::vector<char> done(n, 0);
  for (int it = 0; it < n; ++it) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && w.width[i] > eps && (best < 0 || w.width[i] > w.width[best])) best = i;
    if (best < 0) break;
    done[best] = 1;
    for (std::size_t e = 0; e < y.size(); ++e) {
      if (net.links[e].from != best || y[e] <= eps) continue;
      int v = net.links[e].to;
      double cand = std::min(w.width[best], y[e]);
      if (cand > w.width[v] + eps) {
        w.width[v] = cand;
        w.parent_edge[v] = static_cast<int>(e);
      }
    }
  }
  return w;
}

// splits one source's aggregated flow into per-destination flows by
// repeatedly stripping the widest path toward the best-served demand
void recover_source_flows(const net::PhysicalNetwork& net, int src, std::vector<double>& y,
                          std::vector<std::pair<int, double>>& absorb,
                          const std::vector<int>& od_index, FlowSolution& out) {
  double scale = 0;
  for (auto& [q, a] : absorb) scale += a;
  const double tol = 1e-9 * std::max(1.0, scale);
  const double eps = 1e-12 * std::max(1.0, scale);
  int guard = 4 * static_cast<int>(y.size() + absorb.size()) + 16;
  for (;;) {
    bool open = false;
    for (const auto& qa : absorb) open = open || qa.second > tol;
    if (!open) break;
    if (--guard < 0) throw EngineError("flow recovery did not terminate");
    WidestPath w = widest_paths(net, y, src, eps);
    int pick = -1;
    double pick_m = 0;
    for (std::size_t i = 0; i < absorb.size(); ++i) {
      auto [q, a] = absorb[i];
      double m = std::min(w.width[q], a);
      if (a > tol && m > pick_m) {
        pick = static_cast<int>(i);
        pick_m = m;
      }
    }
    if (pick < 0) {
      double worst = 0;
      for (const auto& qa : absorb) worst = std::max(worst, qa.second);
      if (worst > 1e-6 * std::max(1.0, scale))
        throw EngineError("aggregated flow has unreachable residual demand");
      break;
    }
    auto& [q, a] = absorb[pick];
    std::vector<double>& frac = out.fractions[od_index[pick]];
    const double t = out.od_demand[od_index[pick]];
    for (int v = q; v != src; v = net.links[w.parent_edge[v]].from) {
      int e = w.parent_edge[v];
      y[e] -= pick_m;
      frac[e] += pick_m / t;
    }
    a -= pick_m;
  }
}

FlowSolution solve_aggregated(const net::PhysicalNetwork& net, const net::TrafficMatrix& d,
                              bool want_fractions) {
  FlowSolution out;
  out.ods = collect_ods(d);
  for (auto [p, q] : out.ods) out.od_demand.push_back(d.at(p, q));
  const int E = static_cast<int>(net.links.size());
  const int K = static_cast<int>(out.ods.size());
  if (K == 0) {
    out.routable = out.feasible = true;
    return out;
  }
  std::vector<int> srcs;
  std::vector<double> supply;
  for (int p = 0; p < d.n; ++p) {
    double t = 0;
    for (int q = 0; q < d.n; ++q)
      if (q != p) t += d.at(p, q);
    if (t > 0) {
      srcs.push_back(p);
      supply.push_back(t);
    }
  }
  const int S = static_cast<int>(srcs.size());
  lp::LinearProgram prog;
  for (int s = 0; s < S; ++s)
    for (int e = 0; e < E; ++e) prog.add_variable(0.0, supply[s], 0.0);
  const int uvar = prog.add_variable(0.0, lp::kInf, 1.0);
  auto yv = [E](int s, int e) { return s * E + e; };
  for (int s = 0; s < S; ++s) {
    const int p = srcs[s];
    for (int i = 0; i < net.num_nodes; ++i) {
      if (i == p) continue;  // source row is implied
      std::vector<double> row(prog.num_vars(), 0.0);
      for (int e = 0; e < E; ++e) {
        if (net.links[e].from == i) row[yv(s, e)] += 1.0;
        if (net.links[e].to == i) row[yv(s, e)] -= 1.0;
      }
      prog.add_constraint(row, lp::Relation::Equal, -d.at(p, i));
    }
  }
  for (int e = 0; e < E; ++e) {
    std::vector<double> row(prog.num_vars(), 0.0);
    for (int s = 0; s < S; ++s) row[yv(s, e)] = 1.0;
    row[uvar] = -net.links[e].capacity;
    prog.add_constraint(row, lp::Relation::LessEq, 0.0);
  }
  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::SolveStatus::Optimal) return out;
  out.routable = true;
  double u = 0;
  for (int e = 0; e < E; ++e) {
    double load = 0;
    for (int s = 0; s < S; ++s) load += sol.values[yv(s, e)];
    u = std::max(u, load / net.links[e].capacity);
  }
  out.u_link_max = u;
  out.feasible = u <= 1.0 + 1e-9;
  if (!want_fractions) return out;

  out.fractions.assign(K, std::vector<double>(E, 0.0));
  for (int s = 0; s < S; ++s) {
    const int p = srcs[s];
    std::vector<double> y(E);
    for (int e = 0; e < E; ++e) y[e] = std::max(0.0, sol.values[yv(s, e)]);
    strip_cycles(net, y, 1e-12 * std::max(1.0, supply[s]));
    std::vector<std::pair<int, double>> absorb;
    std::vector<int> od_index;
    for (int k = 0; k < K; ++k)
      if (out.ods[k].first == p) {
        absorb.emplace_back(out.ods[k].second, out.od_demand[k]);
        od_index.push_back(k);
      }
    recover_source_flows(net, p, y, absorb, od_index, out);
  }
  // per-OD fractions must carry the same loads the LP reported
  out.u_link_max = recompute_umax(net, out);
  out.feasible = out.u_link_max <= 1.0 + 1e-9;
  return out;
}

}  // namespace

FlowSolution route_solve(const net::PhysicalNetwork& net, const net::TrafficMatrix& d,
                         RouteForm form, bool want_fractions) {
  if (d.n != net.num_nodes) throw EngineError("traffic matrix size mismatch");
  for (int i = 0; i < d.n; ++i) {
    if (d.at(i, i) != 0) throw EngineError("traffic matrix diagonal must be zero");
    for (int j = 0; j < d.n; ++j)
      if (d.at(i, j) < 0 || !std::isfinite(d.at(i, j)))
        throw EngineError("traffic matrix entries must be finite and nonnegative");
  }
  return form == RouteForm::PerOdPair ? solve_per_od(net, d, want_fractions)
                                      : solve_aggregated(net, d, want_fractions);
}

PlacementResult initial_placement(const net::PhysicalNetwork& net, const std::vector<int>& sizes) {
  const int S = net.num_nodes;
  const int V = static_cast<int>(sizes.size());
  PlacementResult out;
  if (V == 0) return out;
  double totw = 0, totc = 0;
  for (int w : sizes) {
    if (w < 0) throw EngineError("vnf size must be nonnegative");
    totw += w;
  }
  for (double c : net.server_capacity) totc += c;
  if (totw > totc) throw EngineError("demand exceeds aggregate capacity");

  lp::LinearProgram prog;
  for (int i = 0; i < V; ++i)
    for (int k = 0; k < S; ++k) prog.add_variable(0.0, 1.0, 0.0);
  const int uvar = prog.add_variable(0.0, lp::kInf, 1.0);
  auto xv = [S](int i, int k) { return i * S + k; };
  for (int i = 0; i < V; ++i) {
    std::vector<double> row(prog.num_vars(), 0.0);
    for (int k = 0; k < S; ++k) row[xv(i, k)] = 1.0;
    prog.add_constraint(row, lp::Relation::Equal, 1.0);
  }
  for (int k = 0; k < S; ++k) {
    std::vector<double> row(prog.num_vars(), 0.0);
    for (int i = 0; i < V; ++i) row[xv(i, k)] = sizes[i];
    row[uvar] = -net.server_capacity[k];
    prog.add_constraint(row, lp::Relation::LessEq, 0.0);
  }
  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::SolveStatus::Optimal) throw EngineError("placement relaxation failed");

  out.server.assign(V, 0);
  for (int i = 0; i < V; ++i) {
    int best = 0;
    for (int k = 1; k < S; ++k)
      if (sol.values[xv(i, k)] > sol.values[xv(i, best)] + 1e-12) best = k;
    out.server[i] = best;
  }

  std::vector<double> load(S, 0.0);
  for (int i = 0; i < V; ++i) load[out.server[i]] += sizes[i];
  auto util = [&](int k) {
    if (net.server_capacity[k] > 0) return load[k] / net.server_capacity[k];
    return load[k] > 0 ? kInf : 0.0;
  };
  int guard = 4 * V * S + 64;
  for (;;) {
    int worst = -1;
    for (int k = 0; k < S; ++k)
      if (load[k] > net.server_capacity[k] + 1e-9 && (worst < 0 || util(k) > util(worst))) worst = k;
    if (worst < 0 || --guard < 0) break;
    // smallest movable vnf on the overloaded server, then the emptiest fit
    int vnf = -1;
    int dest = -1;
    for (int i = 0; i < V; ++i) {
      if (out.server[i] != worst || sizes[i] <= 0) continue;
      if (vnf >= 0 && sizes[i] >= sizes[vnf]) continue;
      int cand = -1;
      for (int k = 0; k < S; ++k) {
        if (k == worst || load[k] + sizes[i] > net.server_capacity[k] + 1e-9) continue;
        if (cand < 0 || util(k) < util(cand)) cand = k;
      }
      if (cand >= 0) {
        vnf = i;
        dest = cand;
      }
    }
    if (vnf < 0) break;  // nothing movable; report the overload honestly
    load[worst] -= sizes[vnf];
    load[dest] += sizes[vnf];
    out.server[vnf] = dest;
  }
  out.u_max = 0;
  for (int k = 0; k < S; ++k) out.u_max = std::max(out.u_max, util(k));
  return out;
}

ServerCheck evaluate_servers(const net::PhysicalNetwork& net, const std::vector<int>& vm_server,
                             const std::vector<int>& vm_sizes, const std::vector<int>& ids_server,
                             const std::vector<int>& ids_sizes) {
  if (vm_server.size() != vm_sizes.size() || ids_server.size() != ids_sizes.size())
    throw EngineError("allocation and size lists differ in length");
  std::vector<double> load(net.num_nodes, 0.0);
  auto add = [&](const std::vector<int>& where, const std::vector<int>& w) {
    for (std::size_t i = 0; i < where.size(); ++i) {
      if (where[i] < 0 || where[i] >= net.num_nodes) throw EngineError("server id out of range");
      load[where[i]] += w[i];
    }
  };
  add(vm_server, vm_sizes);
  add(ids_server, ids_sizes);
  ServerCheck out;
  for (int k = 0; k < net.num_nodes; ++k) {
    double u;
    if (net.server_capacity[k] > 0) u = load[k] / net.server_capacity[k];
    else u = load[k] > 0 ? kInf : 0.0;
    out.u_max = std::max(out.u_max, u);
    if (load[k] > net.server_capacity[k] + 1e-9) out.satisfied = false;
  }
  return out;
}

std::vector<OdPaths> decompose_flows(const net::PhysicalNetwork& net, const FlowSolution& flow) {
  if (!flow.routable) throw EngineError("cannot decompose an unroutable flow");
  if (flow.fractions.size() != flow.ods.size())
    throw EngineError("flow has no per-OD fractions to decompose");
  const int E = static_cast<int>(net.links.size());
  std::vector<OdPaths> out;
  out.reserve(flow.ods.size());
  for (std::size_t k = 0; k < flow.ods.size(); ++k) {
    auto [p, q] = flow.ods[k];
    OdPaths od;
    od.origin = p;
    od.dest = q;
    std::vector<double> y(flow.fractions[k]);
    strip_cycles(net, y, 1e-12);
    double remaining = 1.0;
    int guard = 4 * E + 16;
    while (remaining > 1e-9) {
      if (--guard < 0) throw EngineError("path stripping did not terminate");
      WidestPath w = widest_paths(net, y, p, 1e-12);
      double m = std::min(w.width[q], remaining);
      if (m <= 1e-9) break;
      RoutePath path;
      path.ratio = m;
      for (int v = q; v != p; v = net.links[w.parent_edge[v]].from) {
        y[w.parent_edge[v]] -= m;
        path.nodes.push_back(v);
      }
      path.nodes.push_back(p);
      std::reverse(path.nodes.begin(), path.nodes.end());
      od.paths.push_back(std::move(path));
      remaining -= m;
    }
    if (remaining > 1e-6)
      throw EngineError("flow for an OD pair is not decomposable into paths");
    for (double r : y)
      if (r > 1e-6) throw EngineError("residual cycle flow above tolerance");
    double sum = 0;
    for (const RoutePath& path : od.paths) sum += path.ratio;
    if (std::abs(sum - 1.0) > 1e-6) throw EngineError("path ratios do not sum to 1");
    for (RoutePath& path : od.paths) path.ratio /= sum;
    out.push_back(std::move(od));
  }
  return out;
}

double vn_reliability(const net::PhysicalNetwork& net, const std::vector<OdPaths>& od_paths,
                      const VnSegments& vn) {
  struct Combo {
    double ratio;
    std::vector<int> nodes;                 // sorted unique
    std::vector<std::pair<int, int>> links; // canonical (min,max), sorted unique
  };
  std::vector<Combo> combos{{1.0, {}, {}}};
  for (auto [a, b] : vn.legs) {
    std::vector<RoutePath> leg_paths;
    if (a == b) {
      leg_paths.push_back({1.0, {a}});
    } else {
      const OdPaths* found = nullptr;
      for (const OdPaths& od : od_paths)
        if (od.origin == a && od.dest == b) {
          found = &od;
          break;
        }
      if (!found) throw EngineError("no decomposed route for a VN leg");
      leg_paths = found->paths;
    }
    std::vector<Combo> next;
    next.reserve(combos.size() * leg_paths.size());
    for (const Combo& c : combos) {
      for (const RoutePath& path : leg_paths) {
        Combo m = c;
        m.ratio *= path.ratio;
        for (int v : path.nodes) m.nodes.push_back(v);
        for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
          m.links.emplace_back(std::min(path.nodes[i], path.nodes[i + 1]),
                               std::max(path.nodes[i], path.nodes[i + 1]));
        next.push_back(std::move(m));
      }
    }
    combos = std::move(next);
  }
  double total = 0;
  for (Combo& c : combos) {
    std::sort(c.nodes.begin(), c.nodes.end());
    c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
    std::sort(c.links.begin(), c.links.end());
    c.links.erase(std::unique(c.links.begin(), c.links.end()), c.links.end());
    double rel = 1.0;
    for (int v : c.nodes) rel *= net.node_reliability[v];
    for (auto [i, j] : c.links) {
      int e = net.find_link(i, j);
      if (e < 0) throw EngineError("decomposed path uses a missing link");
      rel *= net.links[e].reliability;
    }
    total += c.ratio * rel;
  }
  return total;
}

double reliability_total(const net::PhysicalNetwork& net, const FlowSolution& flow,
                         const std::vector<VnSegments>& vns) {
  std::vector<OdPaths> od_paths = decompose_flows(net, flow);
  double tsum = 0, acc = 0;
  for (const VnSegments& vn : vns) {
    if (vn.demand <= 0) continue;
    tsum += vn.demand;
    acc += vn.demand * vn_reliability(net, od_paths, vn);
  }
  return tsum > 0 ? acc / tsum : 1.0;
}

}  // namespace nfvcoord::engines
