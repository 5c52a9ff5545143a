#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nfvcoord/ioconv.hpp"
#include "nfvcoord/rng.hpp"

using namespace nfvcoord;

namespace {

net::PhysicalNetwork line_net(int n) {
  std::ostringstream text;
  text << "[nodes]\n";
  for (int i = 1; i <= n; ++i) text << (i > 1 ? " " : "") << i;
  text << "\n[edges]\n";
  for (int i = 1; i < n; ++i) text << i << " " << (i + 1) << " 10\n";
  text << "[servers]\n";
  for (int i = 1; i <= n; ++i) text << i << " 10\n";
  std::istringstream in(text.str());
  return net::load_topology(in, "<line>");
}

net::VnDemand vn(int id, double t, int client = -1, int peer = -1) {
  net::VnDemand v;
  v.vn_id = id;
  v.traffic = t;
  v.vm_size = 1;
  v.client_node = client;
  v.peer_vm = peer;
  return v;
}

}  // namespace

TEST_CASE("client to ids to vm fills two cells") {
  auto nw = line_net(8);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.fixed_node = true;
  opts.ids_isolation = true;
  std::vector<net::VnDemand> demands = {vn(0, 1.0, /*client=*/3)};
  std::vector<net::IdsSpec> ids = {{2, 1}};
  auto conv = ioconv::convert(nw, demands, ids, /*vm=*/{7}, /*ids=*/{5}, opts);
  CHECK(conv.matrix.at(3, 5) == 1.0);
  CHECK(conv.matrix.at(5, 7) == 1.0);
  CHECK(conv.matrix.total() == 2.0);
  REQUIRE(conv.plans.size() == 1);
  CHECK(conv.plans[0].origin == 3);
  CHECK(conv.plans[0].middle == 5);
  CHECK(conv.plans[0].dest == 7);
  CHECK(conv.plans[0].ids_id == 0);
}

TEST_CASE("colocated legs carry nothing") {
  auto nw = line_net(4);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.fixed_node = true;
  opts.ids_isolation = true;
  std::vector<net::VnDemand> demands = {vn(0, 2.0, 1)};
  std::vector<net::IdsSpec> ids = {{2, 1}};
  // ids and vm share server 2: second leg disappears
  auto conv = ioconv::convert(nw, demands, ids, {2}, {2}, opts);
  CHECK(conv.matrix.at(1, 2) == 2.0);
  CHECK(conv.matrix.total() == 2.0);
  // everything colocated: no traffic at all
  conv = ioconv::convert(nw, demands, ids, {1}, {1}, opts);
  CHECK(conv.matrix.total() == 0.0);
  CHECK(conv.plans[0].middle == 1);
}

TEST_CASE("vm-pair mode uses own and peer servers") {
  auto nw = line_net(5);
  UseCaseOptions opts;  // case with nothing on
  std::vector<net::VnDemand> demands = {vn(0, 1.5, -1, 1), vn(1, 0.5, -1, 0)};
  auto conv = ioconv::convert(nw, demands, {}, {0, 4}, {}, opts);
  CHECK(conv.matrix.at(0, 4) == 1.5);
  CHECK(conv.matrix.at(4, 0) == 0.5);
  CHECK(conv.plans[0].middle == -1);
  CHECK(conv.plans[0].ids_id == -1);
}

TEST_CASE("isolation is the identity map and needs enough ids") {
  auto nw = line_net(3);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.ids_isolation = true;
  std::vector<net::VnDemand> demands = {vn(0, 1, -1, 1), vn(1, 1, -1, 0)};
  std::vector<net::IdsSpec> ids = {{2, 1}, {2, 1}};
  auto pick = ioconv::next_ids_assignment(nw, demands, ids, {0, 1}, {1, 2}, opts);
  CHECK(pick == std::vector<int>{0, 1});
  CHECK_THROWS_WITH_AS(
      ioconv::next_ids_assignment(nw, demands, {{2, 1}}, {0, 1}, {1}, opts),
      doctest::Contains("one ids per vn"), ioconv::ConversionError);
}

TEST_CASE("sharing picks the shortest detour with free sessions") {
  auto nw = line_net(6);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.fixed_node = true;
  std::vector<net::VnDemand> demands = {vn(0, 1, 0)};
  // vm on node 2; ids at node 1 (on the way) vs node 5 (detour)
  std::vector<net::IdsSpec> ids = {{2, 9}, {2, 9}};
  auto pick = ioconv::next_ids_assignment(nw, demands, ids, {2}, {5, 1}, opts);
  CHECK(pick == std::vector<int>{1});
  // colocated ids with both endpoints wins outright
  pick = ioconv::next_ids_assignment(nw, demands, ids, {0}, {5, 0}, opts);
  CHECK(pick == std::vector<int>{1});
}

TEST_CASE("sharing respects session capacity in vn order") {
  auto nw = line_net(4);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.fixed_node = true;
  std::vector<net::VnDemand> demands = {vn(0, 1, 0), vn(1, 1, 0), vn(2, 1, 0)};
  std::vector<net::IdsSpec> ids = {{2, 1}, {2, 2}};
  // both ids colocated with everything: capacity forces 0,1,1
  auto pick = ioconv::next_ids_assignment(nw, demands, ids, {0, 0, 0}, {0, 0}, opts);
  CHECK(pick == std::vector<int>{0, 1, 1});
  std::vector<net::IdsSpec> tight = {{2, 1}, {2, 1}};
  CHECK_THROWS_WITH_AS(
      ioconv::next_ids_assignment(nw, demands, tight, {0, 0, 0}, {0, 0}, opts),
      doctest::Contains("no feasible ids"), ioconv::ConversionError);
}

TEST_CASE("ties go to the lowest ids id") {
  auto nw = line_net(5);
  UseCaseOptions opts;
  opts.with_ids = true;
  opts.fixed_node = true;
  std::vector<net::VnDemand> demands = {vn(0, 1, 0)};
  std::vector<net::IdsSpec> ids = {{2, 9}, {2, 9}};
  // both ids sit on the origin->dest line: equal total length
  auto pick = ioconv::next_ids_assignment(nw, demands, ids, {4}, {1, 3}, opts);
  CHECK(pick == std::vector<int>{0});
}

TEST_CASE("matrix product form matches convert in the plain case") {
  auto nw = line_net(6);
  UseCaseOptions opts;  // no ids, no fixed node
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int k_vn = 2 + static_cast<int>(rng.uniform_int(0, 8));
    std::vector<net::VnDemand> demands;
    std::vector<int> vm_server;
    for (int k = 0; k < k_vn; ++k) {
      int peer = static_cast<int>(rng.uniform_int(0, k_vn - 2));
      if (peer >= k) ++peer;
      demands.push_back(vn(k, rng.uniform01(), -1, peer));
      vm_server.push_back(static_cast<int>(rng.uniform_int(0, nw.num_nodes - 1)));
    }
    auto conv = ioconv::convert(nw, demands, {}, vm_server, {}, opts);
    // t^vm as a VM-by-VM matrix, then D = transpose(Xi) * T * Xi
    std::vector<std::vector<double>> product(nw.num_nodes,
                                             std::vector<double>(nw.num_nodes, 0.0));
    for (int p = 0; p < nw.num_nodes; ++p)
      for (int q = 0; q < nw.num_nodes; ++q)
        for (int i = 0; i < k_vn; ++i)
          for (int j = 0; j < k_vn; ++j) {
            double t_ij = demands[i].peer_vm == j ? demands[i].traffic : 0.0;
            if (vm_server[i] == p && vm_server[j] == q) product[p][q] += t_ij;
          }
    for (int p = 0; p < nw.num_nodes; ++p)
      for (int q = 0; q < nw.num_nodes; ++q) {
        if (p == q) CHECK(conv.matrix.at(p, q) == 0.0);  // colocation rule
        else CHECK(conv.matrix.at(p, q) == product[p][q]);
      }
  }
}

TEST_CASE("volume bounds with and without ids") {
  auto nw = line_net(7);
  Rng rng(5);
  const int k_vn = 12;
  std::vector<net::VnDemand> demands;
  std::vector<int> vm_server;
  double total_t = 0;
  for (int k = 0; k < k_vn; ++k) {
    int peer = static_cast<int>(rng.uniform_int(0, k_vn - 2));
    if (peer >= k) ++peer;
    demands.push_back(vn(k, rng.uniform01(), static_cast<int>(rng.uniform_int(0, 6)), peer));
    vm_server.push_back(static_cast<int>(rng.uniform_int(0, 6)));
    total_t += demands.back().traffic;
  }
  UseCaseOptions plain;
  auto conv = ioconv::convert(nw, demands, {}, vm_server, {}, plain);
  double colocated = 0;
  for (auto& p : conv.plans)
    if (p.origin == p.dest) colocated += p.demand;
  CHECK(conv.matrix.total() == doctest::Approx(total_t - colocated).epsilon(1e-12));

  UseCaseOptions with_ids;
  with_ids.with_ids = true;
  std::vector<net::IdsSpec> ids = {{3, 6}, {3, 6}};
  auto conv2 = ioconv::convert(nw, demands, ids, vm_server, {2, 4}, with_ids);
  CHECK(conv2.matrix.total() <= 2 * total_t + 1e-12);
  int used0 = 0, used1 = 0;
  for (auto& p : conv2.plans) (p.ids_id == 0 ? used0 : used1) += 1;
  CHECK(used0 <= 6);
  CHECK(used1 <= 6);
}

TEST_CASE("bad inputs throw conversion errors") {
  auto nw = line_net(3);
  UseCaseOptions opts;
  CHECK_THROWS_AS(ioconv::convert(nw, {}, {}, {}, {}, opts), ioconv::ConversionError);
  std::vector<net::VnDemand> demands = {vn(0, 1, -1, 0)};
  CHECK_THROWS_AS(ioconv::convert(nw, demands, {}, {9}, {}, opts), ioconv::ConversionError);
  opts.fixed_node = true;
  CHECK_THROWS_WITH_AS(ioconv::convert(nw, demands, {}, {0}, {}, opts),
                       doctest::Contains("client"), ioconv::ConversionError);
}
