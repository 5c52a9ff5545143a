#pragma once

#include <stdexcept>
#include <vector>

#include "nfvcoord/netmodel.hpp"
#include "nfvcoord/options.hpp"

namespace nfvcoord::ioconv {

struct ConversionError : std::runtime_error {
  explicit ConversionError(const std::string& what) : std::runtime_error(what) {}
};

struct VnRoutingPlan {
  int vn = 0;
  int origin = 0;    // client node or the VN's own VM's server
  int middle = -1;   // IDS server when the IDS option is on
  int dest = 0;      // destination VM's server
  double demand = 0.0;
  int ids_id = -1;
};

struct Conversion {
  net::TrafficMatrix matrix;
  std::vector<VnRoutingPlan> plans;
};

// per-VN IDS choice. Isolation maps VN k to IDS k. Sharing walks VNs in id
// order and picks the IDS with free sessions minimizing the hop length of
// origin -> IDS server -> destination, ties to the lowest IDS id.
std::vector<int> next_ids_assignment(const net::PhysicalNetwork& net,
                                     const std::vector<net::VnDemand>& demands,
                                     const std::vector<net::IdsSpec>& ids,
                                     const std::vector<int>& vm_server,
                                     const std::vector<int>& ids_server,
                                     const UseCaseOptions& opts);

// builds the node-to-node traffic matrix and per-VN leg list for the current
// allocation; colocated endpoints contribute no traffic
Conversion convert(const net::PhysicalNetwork& net, const std::vector<net::VnDemand>& demands,
                   const std::vector<net::IdsSpec>& ids, const std::vector<int>& vm_server,
                   const std::vector<int>& ids_server, const UseCaseOptions& opts);

}  // namespace nfvcoord::ioconv
