#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "nfvcoord/netmodel.hpp"

namespace nfvcoord::engines {

struct EngineError : std::runtime_error {
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

// PerOdPair is the literal one-commodity-per-OD formulation; SourceAggregated
// groups commodities by origin (same optimum, far fewer columns) and recovers
// per-OD fractions by path stripping afterwards
enum class RouteForm { SourceAggregated, PerOdPair };

struct FlowSolution {
  bool routable = false;   // false when some demand has no path at all
  bool feasible = false;   // routable and u_link_max <= 1
  double u_link_max = 0.0; // minimal max link utilization over all splittable routings
  std::vector<std::pair<int, int>> ods;        // (origin, dest), row-major matrix order
  std::vector<double> od_demand;
  std::vector<std::vector<double>> fractions;  // per od, per directed link
};

FlowSolution route_solve(const net::PhysicalNetwork& net, const net::TrafficMatrix& d,
                         RouteForm form = RouteForm::SourceAggregated,
                         bool want_fractions = true);

struct PlacementResult {
  std::vector<int> server;  // per vnf
  double u_max = 0.0;       // integral max utilization after rounding and repair
};

// relaxed min-max-utilization LP, largest-fraction rounding, then overload
// repair by moving smallest vnfs to the least-utilized server that fits them
PlacementResult initial_placement(const net::PhysicalNetwork& net, const std::vector<int>& sizes);

struct ServerCheck {
  double u_max = 0.0;
  bool satisfied = true;
};

// max utilization over servers with vm and ids loads aggregated
ServerCheck evaluate_servers(const net::PhysicalNetwork& net, const std::vector<int>& vm_server,
                             const std::vector<int>& vm_sizes, const std::vector<int>& ids_server,
                             const std::vector<int>& ids_sizes);

struct RoutePath {
  double ratio = 0.0;
  std::vector<int> nodes;  // origin..dest sequence
};

struct OdPaths {
  int origin = 0;
  int dest = 0;
  std::vector<RoutePath> paths;  // ratios sum to 1
};

// widest-path stripping of each OD's flow; throws EngineError on residual
// cycle flow above tolerance
std::vector<OdPaths> decompose_flows(const net::PhysicalNetwork& net, const FlowSolution& flow);

// a VN's end-to-end route as consecutive legs between hosting nodes;
// zero-length legs (colocated endpoints) are kept so their node still counts
struct VnSegments {
  std::vector<std::pair<int, int>> legs;
  double demand = 0.0;
};

double vn_reliability(const net::PhysicalNetwork& net, const std::vector<OdPaths>& od_paths,
                      const VnSegments& vn);

// traffic-weighted average of per-VN reliabilities; 1.0 when total traffic is 0
double reliability_total(const net::PhysicalNetwork& net, const FlowSolution& flow,
                         const std::vector<VnSegments>& vns);

}  // namespace nfvcoord::engines
