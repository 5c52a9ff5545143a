#include "nfvcoord/system.hpp"

#include <utility>

#include "nfvcoord/rng.hpp"

namespace nfvcoord::sys {

SystemModel make_model(net::PhysicalNetwork net, std::vector<net::VnDemand> vns,
                       std::vector<net::IdsSpec> ids, UseCaseOptions options) {
  SystemModel m;
  m.net = std::move(net);
  m.vns = std::move(vns);
  m.ids = std::move(ids);
  m.options = options;
  m.vm_sizes.reserve(m.vns.size());
  for (const auto& v : m.vns) m.vm_sizes.push_back(v.vm_size);
  m.ids_sizes.reserve(m.ids.size());
  for (const auto& s : m.ids) m.ids_sizes.push_back(s.size);
  return m;
}

Evaluation evaluate(const SystemModel& model, const Allocation& alloc) {
  Evaluation ev;
  ioconv::Conversion conv;
  try {
    conv = ioconv::convert(model.net, model.vns, model.ids, alloc.vm_server, alloc.ids_server,
                           model.options);
  } catch (const ioconv::ConversionError&) {
    return ev;  // nothing measurable without a demand matrix
  }
  ev.conversion_ok = true;

  const auto servers = engines::evaluate_servers(model.net, alloc.vm_server, model.vm_sizes,
                                                 alloc.ids_server, model.ids_sizes);
  ev.servers_ok = servers.satisfied;
  ev.u_server_max = servers.satisfied ? servers.u_max : -1.0;

  const bool need_paths = model.options.with_reliability;
  const auto flow = engines::route_solve(model.net, conv.matrix,
                                         engines::RouteForm::SourceAggregated, need_paths);
  ev.route_ok = flow.feasible;
  ev.u_link_max = flow.feasible ? flow.u_link_max : -1.0;

  if (model.options.with_reliability) {
    if (!flow.feasible) {
      ev.r_total = -1.0;
    } else {
      std::vector<engines::VnSegments> segs;
      segs.reserve(conv.plans.size());
      for (const auto& p : conv.plans) {
        engines::VnSegments s;
        s.demand = p.demand;
        if (p.middle >= 0) {
          s.legs = {{p.origin, p.middle}, {p.middle, p.dest}};
        } else {
          s.legs = {{p.origin, p.dest}};
        }
        segs.push_back(std::move(s));
      }
      ev.r_total = engines::reliability_total(model.net, flow, segs);
    }
  }
  return ev;
}

std::uint64_t allocation_key(const Allocation& alloc) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;  // arbitrary nonzero start
  auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
  mix(alloc.vm_server.size());
  for (int s : alloc.vm_server) mix(static_cast<std::uint64_t>(s) + 1);
  mix(alloc.ids_server.size());
  for (int s : alloc.ids_server) mix(static_cast<std::uint64_t>(s) + 1);
  return h;
}

const Evaluation& EvaluationCache::get(const Allocation& alloc) {
  const std::uint64_t key = allocation_key(alloc);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    if (it->second.first == alloc) {
      ++hits_;
      return it->second.second;
    }
    // hash collision: keep the resident entry, answer without caching
    ++misses_;
    scratch_ = evaluate(model_, alloc);
    return scratch_;
  }
  ++misses_;
  Evaluation ev = evaluate(model_, alloc);
  if (entries_.size() >= max_entries_) {
    scratch_ = ev;
    return scratch_;
  }
  auto [pos, inserted] = entries_.emplace(key, std::make_pair(alloc, std::move(ev)));
  (void)inserted;
  return pos->second.second;
}

}  // namespace nfvcoord::sys
