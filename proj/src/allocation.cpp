#include "vne/allocation.hpp"

#include <map>
#include <stdexcept>

namespace vne {

Allocation allocation_of(const VirtualNetwork& vn, const Embedding& embedding) {
  if (embedding.node_map.size() != vn.node_count() || embedding.link_map.size() != vn.link_count()) {
    throw std::invalid_argument("embedding does not cover the virtual network");
  }
  std::map<NodeId, double> cpu;
  for (std::size_t v = 0; v < vn.node_count(); ++v) cpu[embedding.node_map[v]] += vn.nodes()[v].cpu_demand;
  std::map<LinkId, double> bw;
  for (std::size_t l = 0; l < vn.link_count(); ++l) {
    for (LinkId sl : embedding.link_map[l]) bw[sl] += vn.links()[l].bw_demand;
  }
  Allocation a;
  a.cpu.assign(cpu.begin(), cpu.end());
  a.bw.assign(bw.begin(), bw.end());
  return a;
}

Allocation apply_embedding(SubstrateNetwork& sn, const VirtualNetwork& vn, const Embedding& embedding) {
  Allocation a = allocation_of(vn, embedding);
  for (const auto& [s, amount] : a.cpu) {
    if (amount > sn.node(s).cpu_available) throw std::logic_error("embedding oversubscribes CPU");
  }
  for (const auto& [l, amount] : a.bw) {
    if (amount > sn.link(l).bw_available) throw std::logic_error("embedding oversubscribes bandwidth");
  }
  for (const auto& [s, amount] : a.cpu) {
    sn.reserve_cpu(s, amount);
    sn.set_powered(s, true);
  }
  for (const auto& [l, amount] : a.bw) sn.reserve_bw(l, amount);
  return a;
}

void release_allocation(SubstrateNetwork& sn, const Allocation& alloc) {
  for (const auto& [s, amount] : alloc.cpu) {
    sn.release_cpu(s, amount);
    if (sn.node(s).cpu_available == sn.node(s).cpu_capacity) sn.set_powered(s, false);
  }
  for (const auto& [l, amount] : alloc.bw) sn.release_bw(l, amount);
}

}  // namespace vne
