#include "nfvcoord/netmodel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nfvcoord/rng.hpp"

namespace nfvcoord::net {

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  throw LoadError(name + ":" + std::to_string(line) + ": " + msg);
}

std::string strip(const std::string& raw) {
  std::string s = raw;
  auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PhysicalNetwork load_topology(std::istream& in, const std::string& name) {
  PhysicalNetwork net;
  enum class Section { None, Nodes, Edges, Servers } sec = Section::None;
  bool seen_nodes = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[nodes]") sec = Section::Nodes;
      else if (line == "[edges]") sec = Section::Edges;
      else if (line == "[servers]") sec = Section::Servers;
      else fail(name, lineno, "unknown section " + line);
      if (sec != Section::Nodes && !seen_nodes)
        fail(name, lineno, "section " + line + " before [nodes]");
      continue;
    }
    std::istringstream toks(line);
    switch (sec) {
      case Section::None:
        fail(name, lineno, "data before any section header");
      case Section::Nodes: {
        if (seen_nodes) fail(name, lineno, "multiple [nodes] lines");
        int id, expect = 1;
        while (toks >> id) {
          if (id != expect) fail(name, lineno, "node ids must be 1..N in order");
          ++expect;
        }
        if (!toks.eof()) fail(name, lineno, "bad token in node list");
        net.num_nodes = expect - 1;
        if (net.num_nodes < 2) fail(name, lineno, "need at least 2 nodes");
        net.server_capacity.assign(net.num_nodes, 0.0);
        net.node_reliability.assign(net.num_nodes, 1.0);
        seen_nodes = true;
        break;
      }
      case Section::Edges: {
        int i, j;
        double cap, rel = 1.0;
        if (!(toks >> i >> j >> cap)) fail(name, lineno, "edge needs: i j capacity [reliability]");
        toks >> rel;
        std::string extra;
        if (toks.fail() && !toks.eof()) fail(name, lineno, "bad reliability token");
        toks.clear();
        if (toks >> extra) fail(name, lineno, "trailing tokens on edge line");
        if (i < 1 || i > net.num_nodes || j < 1 || j > net.num_nodes)
          fail(name, lineno, "edge endpoint out of range");
        if (i == j) fail(name, lineno, "self-loop not allowed");
        if (!(cap > 0) || !std::isfinite(cap)) fail(name, lineno, "edge capacity must be positive");
        if (!(rel >= 0 && rel <= 1)) fail(name, lineno, "edge reliability must be in [0,1]");
        if (net.find_link(i - 1, j - 1) >= 0) fail(name, lineno, "duplicate edge");
        net.links.push_back({i - 1, j - 1, cap, rel});
        net.links.push_back({j - 1, i - 1, cap, rel});
        break;
      }
      case Section::Servers: {
        int i;
        double cap, rel = 1.0;
        if (!(toks >> i >> cap)) fail(name, lineno, "server needs: i capacity [reliability]");
        toks >> rel;
        if (toks.fail() && !toks.eof()) fail(name, lineno, "bad reliability token");
        toks.clear();
        std::string extra;
        if (toks >> extra) fail(name, lineno, "trailing tokens on server line");
        if (i < 1 || i > net.num_nodes) fail(name, lineno, "server node out of range");
        if (cap < 0 || !std::isfinite(cap)) fail(name, lineno, "server capacity must be >= 0");
        if (!(rel >= 0 && rel <= 1)) fail(name, lineno, "node reliability must be in [0,1]");
        net.server_capacity[i - 1] = cap;
        net.node_reliability[i - 1] = rel;
        break;
      }
    }
  }
  if (!seen_nodes) fail(name, lineno, "missing [nodes] section");
  validate(net);
  return net;
}

PhysicalNetwork load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open topology file " + path);
  return load_topology(in, path);
}

void save_topology(const PhysicalNetwork& net, std::ostream& out) {
  out << "[nodes]\n";
  for (int i = 0; i < net.num_nodes; ++i) out << (i ? " " : "") << (i + 1);
  out << "\n[edges]\n";
  for (const Link& l : net.links) {
    if (l.from > l.to) continue;  // one line per undirected pair
    out << (l.from + 1) << " " << (l.to + 1) << " " << fmt(l.capacity);
    if (l.reliability != 1.0) out << " " << fmt(l.reliability);
    out << "\n";
  }
  out << "[servers]\n";
  for (int i = 0; i < net.num_nodes; ++i) {
    out << (i + 1) << " " << fmt(net.server_capacity[i]);
    if (net.node_reliability[i] != 1.0) out << " " << fmt(net.node_reliability[i]);
    out << "\n";
  }
}

void validate(const PhysicalNetwork& net) {
  if (net.num_nodes < 2) throw LoadError("network needs at least 2 nodes");
  if (net.server_capacity.size() != static_cast<std::size_t>(net.num_nodes) ||
      net.node_reliability.size() != static_cast<std::size_t>(net.num_nodes))
    throw LoadError("per-node arrays sized inconsistently");
  for (int i = 0; i < net.num_nodes; ++i) {
    if (net.server_capacity[i] < 0) throw LoadError("negative server capacity");
    if (!(net.node_reliability[i] >= 0 && net.node_reliability[i] <= 1))
      throw LoadError("node reliability out of [0,1]");
  }
  for (const Link& l : net.links) {
    if (l.from < 0 || l.from >= net.num_nodes || l.to < 0 || l.to >= net.num_nodes || l.from == l.to)
      throw LoadError("link endpoint out of range");
    if (!(l.capacity > 0)) throw LoadError("link capacity must be positive");
    if (!(l.reliability >= 0 && l.reliability <= 1)) throw LoadError("link reliability out of [0,1]");
    int back = net.find_link(l.to, l.from);
    if (back < 0) throw LoadError("link missing reverse orientation");
    const Link& r = net.links[back];
    if (r.capacity != l.capacity || r.reliability != l.reliability)
      throw LoadError("asymmetric capacity or reliability on link pair");
  }
  for (std::size_t e = 0; e < net.links.size(); ++e)
    for (std::size_t f = e + 1; f < net.links.size(); ++f)
      if (net.links[e].from == net.links[f].from && net.links[e].to == net.links[f].to)
        throw LoadError("duplicate directed link");
}

DemandSet generate_demands(const DemandSpec& spec, std::uint64_t seed) {
  if (spec.n_vn < 1) throw LoadError("demand spec needs n_vn >= 1");
  if (spec.vm_size_lo < 1 || spec.vm_size_hi < spec.vm_size_lo)
    throw LoadError("bad vm size range");
  if (spec.fixed_node && spec.n_nodes < 1) throw LoadError("fixed-node mode needs n_nodes");
  Rng rng(seed);
  DemandSet out;
  out.vns.resize(spec.n_vn);
  // draw order is part of the contract: traffic, then sizes, then endpoints
  for (int k = 0; k < spec.n_vn; ++k) {
    out.vns[k].vn_id = k;
    out.vns[k].traffic = rng.uniform01();
  }
  for (int k = 0; k < spec.n_vn; ++k)
    out.vns[k].vm_size = rng.uniform_int(spec.vm_size_lo, spec.vm_size_hi);
  for (int k = 0; k < spec.n_vn; ++k) {
    if (spec.fixed_node) {
      out.vns[k].client_node = rng.uniform_int(0, spec.n_nodes - 1);
    } else if (spec.n_vn >= 2) {
      int p = rng.uniform_int(0, spec.n_vn - 2);
      out.vns[k].peer_vm = (p >= k) ? p + 1 : p;
    } else {
      out.vns[k].peer_vm = 0;  // degenerate single-VN case talks to itself
    }
  }
  out.ids.assign(spec.n_ids, IdsSpec{spec.ids_size, spec.ids_capacity});
  return out;
}

void save_demands(const DemandSet& d, std::ostream& out) {
  out << "[vns]\n";
  out << "# id traffic vm_size client_node peer_vm\n";
  for (const VnDemand& v : d.vns)
    out << v.vn_id << " " << fmt(v.traffic) << " " << v.vm_size << " " << v.client_node << " "
        << v.peer_vm << "\n";
  out << "[ids]\n";
  out << "# size session_capacity\n";
  for (const IdsSpec& s : d.ids) out << s.size << " " << s.session_capacity << "\n";
}

DemandSet load_demands(std::istream& in, const std::string& name) {
  DemandSet out;
  enum class Section { None, Vns, Ids } sec = Section::None;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line == "[vns]") { sec = Section::Vns; continue; }
    if (line == "[ids]") { sec = Section::Ids; continue; }
    if (line.front() == '[') fail(name, lineno, "unknown section " + line);
    std::istringstream toks(line);
    if (sec == Section::Vns) {
      VnDemand v;
      if (!(toks >> v.vn_id >> v.traffic >> v.vm_size >> v.client_node >> v.peer_vm))
        fail(name, lineno, "vn line needs: id traffic vm_size client_node peer_vm");
      if (v.vn_id != static_cast<int>(out.vns.size())) fail(name, lineno, "vn ids must be 0..K-1 in order");
      out.vns.push_back(v);
    } else if (sec == Section::Ids) {
      IdsSpec s;
      if (!(toks >> s.size >> s.session_capacity)) fail(name, lineno, "ids line needs: size session_capacity");
      out.ids.push_back(s);
    } else {
      fail(name, lineno, "data before any section header");
    }
  }
  return out;
}

}  // namespace nfvcoord::net
