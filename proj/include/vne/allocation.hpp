#pragma once

#include <utility>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/topology.hpp"

namespace vne {

/// Resources one embedding holds on one substrate, aggregated per node and
/// per link.
struct Allocation {
  std::vector<std::pair<NodeId, double>> cpu;
  std::vector<std::pair<LinkId, double>> bw;

  bool empty() const { return cpu.empty() && bw.empty(); }
};

/// Aggregates the embedding's demands without touching the substrate.
Allocation allocation_of(const VirtualNetwork& vn, const Embedding& embedding);

/// Reserves the embedding's CPU and bandwidth and powers its hosts on.
Allocation apply_embedding(SubstrateNetwork& sn, const VirtualNetwork& vn, const Embedding& embedding);

/// Returns the resources and powers off hosts left fully idle.
void release_allocation(SubstrateNetwork& sn, const Allocation& alloc);

}  // namespace vne
