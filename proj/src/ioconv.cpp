#include "nfvcoord/ioconv.hpp"

#include <limits>
#include <vector>

namespace nfvcoord::ioconv {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

// unit-hop distances from every node; tiny graphs, plain BFS per source
std::vector<std::vector<int>> hop_matrix(const net::PhysicalNetwork& net) {
  const int n = net.num_nodes;
  std::vector<std::vector<int>> hops(n, std::vector<int>(n, kUnreachable));
  for (int s = 0; s < n; ++s) {
    auto& h = hops[s];
    h[s] = 0;
    std::vector<int> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (const net::Link& l : net.links) {
        if (l.from != u || h[l.to] != kUnreachable) continue;
        h[l.to] = h[u] + 1;
        queue.push_back(l.to);
      }
    }
  }
  return hops;
}

int origin_of(const net::VnDemand& vn, const std::vector<int>& vm_server, bool fixed_node) {
  if (fixed_node) {
    if (vn.client_node < 0) throw ConversionError("fixed-node mode but a VN has no client node");
    return vn.client_node;
  }
  return vm_server[vn.vn_id];
}

int dest_of(const net::VnDemand& vn, const std::vector<int>& vm_server, bool fixed_node) {
  if (fixed_node) return vm_server[vn.vn_id];
  if (vn.peer_vm < 0 || vn.peer_vm >= static_cast<int>(vm_server.size()))
    throw ConversionError("VM-pair mode but a VN has no peer VM");
  return vm_server[vn.peer_vm];
}

}  // namespace

std::vector<int> next_ids_assignment(const net::PhysicalNetwork& net,
                                     const std::vector<net::VnDemand>& demands,
                                     const std::vector<net::IdsSpec>& ids,
                                     const std::vector<int>& vm_server,
                                     const std::vector<int>& ids_server,
                                     const UseCaseOptions& opts) {
  if (!opts.with_ids) throw ConversionError("ids assignment requested without the ids option");
  if (ids.size() != ids_server.size()) throw ConversionError("ids list and placement differ");
  const int k_vn = static_cast<int>(demands.size());
  std::vector<int> chosen(k_vn, -1);
  if (opts.ids_isolation) {
    if (static_cast<int>(ids.size()) < k_vn)
      throw ConversionError("isolation needs one ids per vn");
    for (int k = 0; k < k_vn; ++k) chosen[k] = k;
    return chosen;
  }
  auto hops = hop_matrix(net);
  std::vector<int> sessions(ids.size(), 0);
  for (int k = 0; k < k_vn; ++k) {
    const int o = origin_of(demands[k], vm_server, opts.fixed_node);
    const int d = dest_of(demands[k], vm_server, opts.fixed_node);
    int best = -1;
    long best_len = 0;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (sessions[j] >= ids[j].session_capacity) continue;
      long len = static_cast<long>(hops[o][ids_server[j]]) + hops[ids_server[j]][d];
      if (len >= kUnreachable) continue;
      if (best < 0 || len < best_len) {
        best = static_cast<int>(j);
        best_len = len;
      }
    }
    if (best < 0) throw ConversionError("no feasible ids for a vn");
    sessions[best] += 1;
    chosen[k] = best;
  }
  return chosen;
}

Conversion convert(const net::PhysicalNetwork& net, const std::vector<net::VnDemand>& demands,
                   const std::vector<net::IdsSpec>& ids, const std::vector<int>& vm_server,
                   const std::vector<int>& ids_server, const UseCaseOptions& opts) {
  if (demands.empty()) throw ConversionError("no demands to convert");
  if (vm_server.size() != demands.size()) throw ConversionError("vm placement size mismatch");
  for (int s : vm_server)
    if (s < 0 || s >= net.num_nodes) throw ConversionError("vm server out of range");
  for (int s : ids_server)
    if (s < 0 || s >= net.num_nodes) throw ConversionError("ids server out of range");

  std::vector<int> assignment;
  if (opts.with_ids)
    assignment = next_ids_assignment(net, demands, ids, vm_server, ids_server, opts);

  Conversion out;
  out.matrix = net::TrafficMatrix(net.num_nodes);
  out.plans.reserve(demands.size());
  for (std::size_t k = 0; k < demands.size(); ++k) {
    VnRoutingPlan plan;
    plan.vn = static_cast<int>(k);
    plan.demand = demands[k].traffic;
    plan.origin = origin_of(demands[k], vm_server, opts.fixed_node);
    plan.dest = dest_of(demands[k], vm_server, opts.fixed_node);
    if (opts.with_ids) {
      plan.ids_id = assignment[k];
      plan.middle = ids_server[plan.ids_id];
      if (plan.origin != plan.middle) out.matrix.at(plan.origin, plan.middle) += plan.demand;
      if (plan.middle != plan.dest) out.matrix.at(plan.middle, plan.dest) += plan.demand;
    } else {
      if (plan.origin != plan.dest) out.matrix.at(plan.origin, plan.dest) += plan.demand;
    }
    out.plans.push_back(plan);
  }
  return out;
}

}  // namespace nfvcoord::ioconv
