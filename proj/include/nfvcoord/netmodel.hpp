#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfvcoord::net {

struct Link {
  int from = 0;
  int to = 0;
  double capacity = 0;
  double reliability = 1.0;
};

// one server per node; node ids are 0-based internally, 1-based in files
struct PhysicalNetwork {
  int num_nodes = 0;
  std::vector<Link> links;               // directed; both orientations present
  std::vector<double> server_capacity;   // per node, 0 = no server
  std::vector<double> node_reliability;  // per node

  int find_link(int from, int to) const {
    for (std::size_t e = 0; e < links.size(); ++e)
      if (links[e].from == from && links[e].to == to) return static_cast<int>(e);
    return -1;
  }
};

struct LoadError : std::runtime_error {
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

// structured text format: [nodes] / [edges] / [servers] sections,
// '#' comments, undirected edges expanded to directed pairs
PhysicalNetwork load_topology(std::istream& in, const std::string& name);
PhysicalNetwork load_topology_file(const std::string& path);
void save_topology(const PhysicalNetwork& net, std::ostream& out);

// throws LoadError on asymmetric links, bad capacities or reliabilities
void validate(const PhysicalNetwork& net);

struct TrafficMatrix {
  int n = 0;
  std::vector<double> cell;  // row-major

  TrafficMatrix() = default;
  explicit TrafficMatrix(int nodes) : n(nodes), cell(static_cast<std::size_t>(nodes) * nodes, 0.0) {}
  double& at(int p, int q) { return cell[static_cast<std::size_t>(p) * n + q]; }
  double at(int p, int q) const { return cell[static_cast<std::size_t>(p) * n + q]; }
  double total() const {
    double s = 0;
    for (double v : cell) s += v;
    return s;
  }
};

// one VN = one traffic demand plus one VM; the far endpoint is either a
// fixed client node or a peer VN's VM, depending on the use case
struct VnDemand {
  int vn_id = 0;
  double traffic = 0.0;  // Gbps
  int vm_size = 1;
  int client_node = -1;  // >= 0 only in fixed-node mode
  int peer_vm = -1;      // >= 0 only in VM-pair mode
};

struct IdsSpec {
  int size = 0;
  int session_capacity = 0;
};

struct DemandSpec {
  int n_vn = 0;
  int n_nodes = 0;
  int vm_size_lo = 1;
  int vm_size_hi = 1;
  bool fixed_node = false;
  int n_ids = 0;
  int ids_size = 0;
  int ids_capacity = 0;
};

struct DemandSet {
  std::vector<VnDemand> vns;
  std::vector<IdsSpec> ids;
};

// deterministic per (spec, seed); traffic ~ U[0,1] Gbps, sizes uniform ints
DemandSet generate_demands(const DemandSpec& spec, std::uint64_t seed);

void save_demands(const DemandSet& d, std::ostream& out);
DemandSet load_demands(std::istream& in, const std::string& name);

}  // namespace nfvcoord::net
