#pragma once

namespace nfvcoord {

// switches that pick one of the twelve demand/use-case shapes
struct UseCaseOptions {
  bool with_ids = false;        // steer flows through inspection VMs
  bool with_reliability = false;  // reliability term participates in scoring
  bool fixed_node = false;      // client sits on a physical node, not a VM
  bool ids_isolation = false;   // one private IDS per VN (vs shared pool)
};

}  // namespace nfvcoord
