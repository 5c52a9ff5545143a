#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nfvcoord/engines.hpp"
#include "nfvcoord/ioconv.hpp"
#include "nfvcoord/netmodel.hpp"
#include "nfvcoord/options.hpp"

namespace nfvcoord::sys {

// immutable per-scenario data shared by every candidate evaluation
struct SystemModel {
  net::PhysicalNetwork net;
  std::vector<net::VnDemand> vns;
  std::vector<net::IdsSpec> ids;
  UseCaseOptions options;
  std::vector<int> vm_sizes;   // derived, one per vn
  std::vector<int> ids_sizes;  // derived, one per ids
};

SystemModel make_model(net::PhysicalNetwork net, std::vector<net::VnDemand> vns,
                       std::vector<net::IdsSpec> ids, UseCaseOptions options);

struct Allocation {
  std::vector<int> vm_server;
  std::vector<int> ids_server;
  bool operator==(const Allocation&) const = default;
};

// every engine's verdict for one allocation. Violated or unmeasurable values
// hold the -1 sentinel; flags carry the actual pass/fail.
struct Evaluation {
  bool conversion_ok = false;
  bool route_ok = false;
  bool servers_ok = false;
  double u_link_max = -1.0;
  double u_server_max = -1.0;
  double r_total = 1.0;  // stays 1.0 while the reliability option is off

  bool all_satisfied() const { return conversion_ok && route_ok && servers_ok; }
};

// demand conversion, server check, route LP, and (when enabled) reliability
Evaluation evaluate(const SystemModel& model, const Allocation& alloc);

std::uint64_t allocation_key(const Allocation& alloc);

// exact memo over allocations; hash collisions fall back to evaluation
class EvaluationCache {
 public:
  explicit EvaluationCache(const SystemModel& model, std::size_t max_entries = 1u << 20)
      : model_(model), max_entries_(max_entries) {}

  const Evaluation& get(const Allocation& alloc);

  std::size_t size() const { return entries_.size(); }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  const SystemModel& model_;
  std::size_t max_entries_;
  std::unordered_map<std::uint64_t, std::pair<Allocation, Evaluation>> entries_;
  Evaluation scratch_;  // backing for uncacheable results
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace nfvcoord::sys
