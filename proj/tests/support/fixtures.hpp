#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "vne/generators.hpp"
#include "vne/topology.hpp"

namespace vne::testing {

/// Substrate from explicit CPU capacities and (a, b, bw) links. Every node
/// gets the given power profile.
inline SubstrateNetwork make_substrate(const std::vector<double>& cpu,
                                       const std::vector<std::tuple<int, int, double>>& links,
                                       double p_base = 86.0, double p_full = 117.0) {
  SubstrateNetwork sn;
  for (double c : cpu) {
    SubstrateNode n;
    n.cpu_capacity = c;
    n.power_baseline = p_base;
    n.power_full = p_full;
    sn.add_node(n);
  }
  for (const auto& [a, b, bw] : links) sn.add_link(a, b, bw);
  return sn;
}

inline VirtualNetwork make_virtual(const std::vector<double>& cpu,
                                   const std::vector<std::tuple<int, int, double>>& links) {
  VirtualNetwork vn;
  for (double c : cpu) vn.add_node(c);
  for (const auto& [a, b, bw] : links) vn.add_link(a, b, bw);
  return vn;
}

inline Vnr make_vnr(VirtualNetwork vn, double lifetime = 100, double arrival = 0, int id = 0) {
  Vnr v;
  v.id = id;
  v.graph = std::move(vn);
  v.arrival_time = arrival;
  v.lifetime = lifetime;
  return v;
}

}  // namespace vne::testing
