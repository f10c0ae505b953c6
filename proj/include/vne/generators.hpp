#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vne/topology.hpp"

namespace vne {

/// Waxman link probability alpha * exp(-d / (beta * L)) over a square plane,
/// L being the plane diagonal.
struct WaxmanShape {
  double alpha = 0.5;
  double beta = 0.2;
  double plane = 1000.0;
};

/// Substrate with exactly n_links links. Candidate edges are ranked by a
/// Waxman-weighted random key; disconnected picks are repaired by swapping
/// the cheapest non-bridge link for the most probable inter-component edge.
SubstrateNetwork generate_waxman_substrate(int n_nodes, int n_links, double bw_low, double bw_high,
                                           std::span<const ServerProfile> server_profiles,
                                           std::uint64_t seed, const WaxmanShape& shape = {});

/// Connected virtual network: a uniform random spanning tree plus extra pairs
/// with a probability chosen so the expected link count is
/// connectivity * n(n-1)/2.
VirtualNetwork generate_waxman_virtual(int n_nodes, double connectivity,
                                       std::span<const double> cpu_choices, double bw_low,
                                       double bw_high, std::uint64_t seed,
                                       double plane = 1000.0);

struct VnParams {
  double connectivity = 0.5;
  std::vector<double> cpu_choices{2500, 2000, 1000, 500};
  double bw_low = 1;
  double bw_high = 50;
};

struct WorkloadParams {
  int n_requests = 1000;
  double arrival_rate = 10;  // requests per 100 time units
  double lifetime_low = 300;
  double lifetime_high = 700;
  int vn_size_low = 2;
  int vn_size_high = 20;
  VnParams vn;
};

/// Poisson arrivals (exponential gaps with mean 100 / arrival_rate), uniform
/// lifetimes and node counts. Returned in arrival order with ids 0..n-1.
std::vector<Vnr> generate_workload(const WorkloadParams& params, std::uint64_t seed);

}  // namespace vne
