#pragma once

#include <limits>
#include <vector>

#include "vne/topology.hpp"

namespace vne {

/// Ordered substrate links from the first endpoint to the second. Empty when
/// both endpoints of the virtual link share a host.
using Path = std::vector<LinkId>;

struct Embedding {
  std::vector<NodeId> node_map;  // indexed by virtual node id
  std::vector<Path> link_map;    // indexed by virtual link id
  double fitness = std::numeric_limits<double>::infinity();
  double energy = 0;
  double cost = 0;

  bool operator==(const Embedding&) const = default;
};

}  // namespace vne
