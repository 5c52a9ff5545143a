#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nfvcoord/netmodel.hpp"
#include "nfvcoord/options.hpp"
#include "nfvcoord/system.hpp"

namespace nfvcoord::scenario {

struct ScenarioError : std::runtime_error {
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// one of the twelve option combinations plus its vnf sizing rules
struct CaseParams {
  int id = 0;
  UseCaseOptions options;
  int vm_size_lo = 1;
  int vm_size_hi = 3;
};

const std::vector<CaseParams>& case_matrix();

// everything that grows with the demand count
struct ScaleParams {
  int n_vn = 0;
  int n_ids = 0;
  int ids_size = 0;
  int ids_capacity = 0;
  int server_cap_lo = 0;
  int server_cap_hi = 0;
  double link_capacity = 0.0;
};

// sizing rules for a case at a given demand count; server capacity ranges
// shrink proportionally on networks with fewer than nine servers
ScaleParams scale_for(const CaseParams& cp, int n_vn, int n_servers = 9);

struct Scenario {
  sys::SystemModel model;
  sys::Allocation initial;
  sys::Evaluation initial_eval;
  std::uint64_t seed = 0;
  int case_id = 0;
  double packed_utilization = 0.0;  // total vnf size / total server capacity
};

struct Rejected {
  std::string reason;
};

using BuildResult = std::variant<Scenario, Rejected>;

// nine-node backbone with the degraded zone around node index 5;
// capacities are left at zero for the builder to assign
net::PhysicalNetwork internet2_base();

// draws demands, calibrates total vnf size to 80% of aggregate server
// capacity, places vms and idss by their relaxation lps, and screens the
// result against every constraint
BuildResult build(int case_id, int n_vn, std::uint64_t seed);

// same, over a caller-supplied topology shape and explicit scaling
BuildResult build_on(net::PhysicalNetwork base, const CaseParams& cp, const ScaleParams& sp,
                     std::uint64_t seed);

}  // namespace nfvcoord::scenario
