#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/topology.hpp"

namespace vne {

/// Hop-bounded path search over substrate links with enough residual
/// bandwidth. Returns a minimum-hop path; among those, the one with the
/// highest bottleneck residual, then the lexicographically smallest node
/// sequence. Buffers are reused across calls.
class PathFinder {
 public:
  explicit PathFinder(const SubstrateNetwork& sn);

  std::optional<Path> find(NodeId src, NodeId dst, double demand, std::span<const double> residual,
                           int max_hops);

 private:
  const SubstrateNetwork* sn_;
  std::vector<int> stamp_;
  std::vector<int> dist_;
  std::vector<double> bottleneck_;
  std::vector<LinkId> pred_link_;
  std::vector<int> rank_;
  std::vector<std::vector<NodeId>> layers_;
  int epoch_ = 0;
};

}  // namespace vne
