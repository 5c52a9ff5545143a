#include "nfvcoord/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "nfvcoord/engines.hpp"

namespace nfvcoord::scenario {

const std::vector<CaseParams>& case_matrix() {
  static const std::vector<CaseParams> cases = [] {
    std::vector<CaseParams> m(12);
    for (int i = 0; i < 12; ++i) {
      CaseParams& c = m[static_cast<std::size_t>(i)];
      c.id = i + 1;
      c.options.with_ids = i < 8;
      c.options.with_reliability = i < 4 || i == 8 || i == 9;
      c.options.fixed_node = i == 0 || i == 1 || i == 4 || i == 5 || i == 8 || i == 10;
      c.options.ids_isolation = c.options.with_ids && i % 2 == 0;
      c.vm_size_lo = i < 8 ? 1 : 3;
      c.vm_size_hi = i < 8 ? 3 : 8;
    }
    return m;
  }();
  return cases;
}

ScaleParams scale_for(const CaseParams& cp, int n_vn, int n_servers) {
  if (n_vn < 1 || n_servers < 1) throw ScenarioError("scale_for needs positive counts");
  ScaleParams sp;
  sp.n_vn = n_vn;
  if (cp.options.with_ids) {
    if (cp.options.ids_isolation) {
      sp.n_ids = n_vn;
      sp.ids_size = 2;
      sp.ids_capacity = 1;
    } else {
      // sharing needs an actual set to pick from, and session capacities
      // that just cover the vns so no single box absorbs every route
      sp.n_ids = std::max(2, (n_vn + 19) / 20);
      sp.ids_size = std::max(1, static_cast<int>(std::lround(n_vn / 5.0)));
      sp.ids_capacity = (n_vn + sp.n_ids - 1) / sp.n_ids;
    }
  }
  const double f = 9.0 / n_servers;
  sp.server_cap_lo = std::max(1, static_cast<int>(std::lround(0.6 * n_vn * f)));
  sp.server_cap_hi = n_vn == 2000 && n_servers == 9
                         ? 1400
                         : std::max(sp.server_cap_lo, static_cast<int>(std::lround(0.72 * n_vn * f)));
  sp.link_capacity = 0.15 * n_vn;
  return sp;
}

net::PhysicalNetwork internet2_base() {
  net::PhysicalNetwork nw;
  nw.num_nodes = 9;
  nw.server_capacity.assign(9, 0.0);
  nw.node_reliability.assign(9, 1.0);
  nw.node_reliability[5] = 0.9;  // degraded zone
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5},
                                       {4, 6}, {5, 6}, {5, 7}, {5, 8}, {6, 8}, {7, 8}};
  for (const auto& [a, b] : edges) {
    const bool soft = (a == 5 && (b == 6 || b == 8));
    net::Link l{a, b, 0.0, soft ? 0.5 : 1.0};
    nw.links.push_back(l);
    std::swap(l.from, l.to);
    nw.links.push_back(l);
  }
  return nw;
}

namespace {

// deterministic +-1 sweeps over the vns in id order; hi < 0 lifts the ceiling
int sweep_sizes(std::vector<net::VnDemand>& vns, int delta, int lo, int hi) {
  bool progress = true;
  while (delta != 0 && progress) {
    progress = false;
    for (auto& v : vns) {
      if (delta > 0 && (hi < 0 || v.vm_size < hi)) {
        ++v.vm_size;
        --delta;
        progress = true;
      } else if (delta < 0 && v.vm_size > lo) {
        --v.vm_size;
        ++delta;
        progress = true;
      }
      if (delta == 0) break;
    }
  }
  return delta;
}

}  // namespace

BuildResult build_on(net::PhysicalNetwork base, const CaseParams& cp, const ScaleParams& sp,
                     std::uint64_t seed) {
  if (sp.n_vn < 1) throw ScenarioError("a scenario needs at least one vn");
  const int n_servers = base.num_nodes;

  // capacities spread evenly across the case's range, then bumped until the
  // 80% +-1% calibration window holds an integer
  for (int i = 0; i < n_servers; ++i) {
    const double frac =
        n_servers > 1 ? static_cast<double>(i) / (n_servers - 1) : 0.0;
    base.server_capacity[static_cast<std::size_t>(i)] =
        sp.server_cap_lo + std::lround(frac * (sp.server_cap_hi - sp.server_cap_lo));
  }
  for (auto& l : base.links) l.capacity = sp.link_capacity;

  auto window = [&base] {
    double c = 0;
    for (double s : base.server_capacity) c += s;
    const long lo = std::lround(std::ceil(0.79 * c - 1e-9));
    const long hi = std::lround(std::floor(0.81 * c + 1e-9));
    return std::tuple<long, long, double>(lo, hi, c);
  };
  for (int bump = 0; std::get<0>(window()) > std::get<1>(window()); ++bump) {
    if (bump >= 64 * n_servers) return Rejected{"calibration window never opened"};
    base.server_capacity[static_cast<std::size_t>(bump % n_servers)] += 1;
  }
  const auto [w_lo, w_hi, total_cap] = window();
  long target = w_lo;
  for (long t = w_lo; t <= w_hi; ++t)
    if (std::abs(t - 0.8 * total_cap) < std::abs(target - 0.8 * total_cap)) target = t;

  net::DemandSpec ds;
  ds.n_vn = sp.n_vn;
  ds.n_nodes = n_servers;
  ds.vm_size_lo = cp.vm_size_lo;
  ds.vm_size_hi = cp.vm_size_hi;
  ds.fixed_node = cp.options.fixed_node;
  ds.n_ids = cp.options.with_ids ? sp.n_ids : 0;
  ds.ids_size = sp.ids_size;
  ds.ids_capacity = sp.ids_capacity;
  net::DemandSet dem = net::generate_demands(ds, seed);

  long have = 0;
  for (const auto& v : dem.vns) have += v.vm_size;
  for (const auto& s : dem.ids) have += s.size;
  int delta = static_cast<int>(target - have);
  delta = sweep_sizes(dem.vns, delta, cp.vm_size_lo, cp.vm_size_hi);
  delta = sweep_sizes(dem.vns, delta, 1, -1);
  if (delta != 0) return Rejected{"calibration target unreachable by vm sizing"};

  sys::SystemModel model =
      sys::make_model(std::move(base), std::move(dem.vns), std::move(dem.ids), cp.options);

  sys::Allocation initial;
  try {
    initial.vm_server = engines::initial_placement(model.net, model.vm_sizes).server;
    if (!model.ids_sizes.empty()) {
      // ids placement runs after the vm stage and sees only the leftover
      // capacity; packing both lists against the raw capacities overloads
      // servers whenever the ids pieces are few and large
      net::PhysicalNetwork residual = model.net;
      for (std::size_t i = 0; i < initial.vm_server.size(); ++i) {
        double& cap = residual.server_capacity[static_cast<std::size_t>(initial.vm_server[i])];
        cap = std::max(0.0, cap - model.vm_sizes[i]);
      }
      initial.ids_server = engines::initial_placement(residual, model.ids_sizes).server;
    }
  } catch (const engines::EngineError& e) {
    return Rejected{std::string("initial placement failed: ") + e.what()};
  }

  const sys::Evaluation ev = sys::evaluate(model, initial);
  if (!ev.conversion_ok) return Rejected{"initial demand conversion failed"};
  if (!ev.servers_ok) return Rejected{"initial solution overloads a server"};
  if (!ev.route_ok) return Rejected{"initial solution is not routable within link capacities"};

  Scenario sc;
  sc.model = std::move(model);
  sc.initial = std::move(initial);
  sc.initial_eval = ev;
  sc.seed = seed;
  sc.case_id = cp.id;
  sc.packed_utilization = static_cast<double>(target) / total_cap;
  return sc;
}

BuildResult build(int case_id, int n_vn, std::uint64_t seed) {
  if (case_id < 1 || case_id > 12) throw ScenarioError("case id must be 1..12");
  const CaseParams& cp = case_matrix()[static_cast<std::size_t>(case_id - 1)];
  return build_on(internet2_base(), cp, scale_for(cp, n_vn), seed);
}

}  // namespace nfvcoord::scenario
