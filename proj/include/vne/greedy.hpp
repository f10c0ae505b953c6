#pragma once

#include "vne/pso.hpp"

namespace vne {

/// Deterministic baseline. Virtual nodes, largest total resource first, each
/// take the first substrate node (most available CPU first) that has the CPU
/// left, passes the incident-bandwidth screen and is not already used by this
/// request. Links are routed like the swarm embedder routes them.
EmbedOutcome greedy_embed(const Vnr& vnr, const SubstrateNetwork& sn, int max_hops, double alpha = 1.0);

}  // namespace vne
