#pragma once

// Test-only reference computations. Nothing here calls the embedder, the
// path finder or the energy module; they re-derive results from the raw
// graph data.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/topology.hpp"

namespace vne::testing {

/// Constraint violations of `e` against the substrate state it was computed
/// on. Empty when the embedding is sound.
inline std::vector<std::string> validate_embedding(const VirtualNetwork& vn, const SubstrateNetwork& before,
                                                   const Embedding& e, int max_hops) {
  std::vector<std::string> bad;
  if (e.node_map.size() != vn.node_count()) return {"node_map size"};
  if (e.link_map.size() != vn.link_count()) return {"link_map size"};
  std::map<NodeId, double> cpu;
  for (std::size_t v = 0; v < vn.node_count(); ++v) {
    const NodeId s = e.node_map[v];
    if (s < 0 || static_cast<std::size_t>(s) >= before.node_count()) {
      bad.push_back("host out of range");
      return bad;
    }
    cpu[s] += vn.nodes()[v].cpu_demand;
  }
  for (const auto& [s, amount] : cpu) {
    if (!(before.nodes()[static_cast<std::size_t>(s)].cpu_available >= amount)) {
      bad.push_back("cpu on node " + std::to_string(s));
    }
  }
  std::map<LinkId, double> bw;
  for (std::size_t l = 0; l < vn.link_count(); ++l) {
    const VirtualLink& vl = vn.links()[l];
    const NodeId from = e.node_map[static_cast<std::size_t>(vl.a)];
    const NodeId to = e.node_map[static_cast<std::size_t>(vl.b)];
    const Path& p = e.link_map[l];
    if (from == to) {
      if (!p.empty()) bad.push_back("co-located link has a path");
      continue;
    }
    if (p.empty()) {
      bad.push_back("missing path for link " + std::to_string(l));
      continue;
    }
    if (static_cast<int>(p.size()) > max_hops) bad.push_back("hop limit on link " + std::to_string(l));
    NodeId at = from;
    std::set<NodeId> visited{at};
    for (LinkId sl : p) {
      if (sl < 0 || static_cast<std::size_t>(sl) >= before.link_count()) {
        bad.push_back("path link out of range");
        break;
      }
      const SubstrateLink& s = before.links()[static_cast<std::size_t>(sl)];
      if (s.a == at) {
        at = s.b;
      } else if (s.b == at) {
        at = s.a;
      } else {
        bad.push_back("discontinuous path on link " + std::to_string(l));
        break;
      }
      if (!visited.insert(at).second) bad.push_back("path revisits a node");
      bw[sl] += vl.bw_demand;
    }
    if (at != to) bad.push_back("path ends at wrong host for link " + std::to_string(l));
  }
  for (const auto& [sl, amount] : bw) {
    if (!(before.links()[static_cast<std::size_t>(sl)].bw_available >= amount)) {
      bad.push_back("bandwidth on substrate link " + std::to_string(sl));
    }
  }
  return bad;
}

/// All simple paths of at most max_hops links from a to b, as link lists.
inline std::vector<Path> all_paths(const SubstrateNetwork& sn, NodeId a, NodeId b, int max_hops) {
  std::vector<Path> out;
  Path cur;
  std::vector<char> on(sn.node_count(), 0);
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == b) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_hops) return;
    on[static_cast<std::size_t>(u)] = 1;
    for (std::size_t li = 0; li < sn.link_count(); ++li) {
      const SubstrateLink& l = sn.links()[li];
      NodeId v = -1;
      if (l.a == u) v = l.b;
      if (l.b == u) v = l.a;
      if (v < 0 || on[static_cast<std::size_t>(v)]) continue;
      cur.push_back(static_cast<LinkId>(li));
      dfs(v);
      cur.pop_back();
    }
    on[static_cast<std::size_t>(u)] = 0;
  };
  dfs(a);
  return out;
}

/// Energy of a node map by direct evaluation of the linear power model.
inline double reference_energy(const VirtualNetwork& vn, const std::vector<NodeId>& map,
                               const SubstrateNetwork& sn, double lifetime) {
  std::map<NodeId, double> load;
  for (std::size_t v = 0; v < map.size(); ++v) load[map[v]] += vn.nodes()[v].cpu_demand;
  double watts = 0;
  for (const auto& [s, l] : load) {
    const SubstrateNode& n = sn.nodes()[static_cast<std::size_t>(s)];
    watts += l / n.cpu_capacity * (n.power_full - n.power_baseline);
    if (!n.powered_on) watts += n.power_baseline;
  }
  return watts * lifetime;
}

/// Exhaustive optimum of alpha * energy + cost over every node map and every
/// combination of hop-bounded simple paths. +inf when nothing is feasible.
inline double brute_force_optimum(const VirtualNetwork& vn, const SubstrateNetwork& sn, double lifetime,
                                  double alpha, int max_hops) {
  const std::size_t n = vn.node_count();
  const std::size_t hosts = sn.node_count();
  double total_cpu = 0;
  for (const VirtualNode& v : vn.nodes()) total_cpu += v.cpu_demand;
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> map(n, 0);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= hosts;
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      map[i] = static_cast<NodeId>(c % hosts);
      c /= hosts;
    }
    std::map<NodeId, double> load;
    for (std::size_t v = 0; v < n; ++v) load[map[v]] += vn.nodes()[v].cpu_demand;
    bool ok = true;
    for (const auto& [s, l] : load) ok = ok && l <= sn.nodes()[static_cast<std::size_t>(s)].cpu_available;
    if (!ok) continue;

    std::vector<std::vector<Path>> options(vn.link_count());
    for (std::size_t l = 0; l < vn.link_count(); ++l) {
      const NodeId a = map[static_cast<std::size_t>(vn.links()[l].a)];
      const NodeId b = map[static_cast<std::size_t>(vn.links()[l].b)];
      options[l] = a == b ? std::vector<Path>{Path{}} : all_paths(sn, a, b, max_hops);
    }
    double best_links = std::numeric_limits<double>::infinity();
    std::vector<double> residual;
    for (const SubstrateLink& sl : sn.links()) residual.push_back(sl.bw_available);
    std::function<void(std::size_t, double)> rec = [&](std::size_t l, double acc) {
      if (acc >= best_links) return;
      if (l == vn.link_count()) {
        best_links = acc;
        return;
      }
      const double d = vn.links()[l].bw_demand;
      for (const Path& p : options[l]) {
        bool fits = true;
        for (LinkId sl : p) fits = fits && residual[static_cast<std::size_t>(sl)] >= d;
        if (!fits) continue;
        for (LinkId sl : p) residual[static_cast<std::size_t>(sl)] -= d;
        rec(l + 1, acc + d * static_cast<double>(p.size()));
        for (LinkId sl : p) residual[static_cast<std::size_t>(sl)] += d;
      }
    };
    rec(0, 0.0);
    if (!std::isfinite(best_links)) continue;
    const double value =
        alpha * reference_energy(vn, map, sn, lifetime) + (total_cpu + best_links) * lifetime;
    best = std::min(best, value);
  }
  return best;
}

}  // namespace vne::testing
