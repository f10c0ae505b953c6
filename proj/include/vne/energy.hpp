#pragma once

// Objective arithmetic: server power, per-request energy, embedding cost,
// revenue, fitness and long-run averaging. All functions are pure.

#include <span>

#include "vne/embedding.hpp"
#include "vne/topology.hpp"

namespace vne {

struct PowerBreakdown {
  double dynamic_watts = 0;
  double baseline_watts = 0;
  double total_watts = 0;
};

/// Linear utilization model: dynamic = (sum of demands / capacity) *
/// (power_full - power_baseline); the baseline is charged only when this
/// placement switches the host on.
PowerBreakdown node_power(const SubstrateNode& host, std::span<const double> hosted_cpu_demands,
                          bool newly_powered);

/// Total power drawn by placing vn per node_map on sn (hosts currently off
/// are charged their baseline once), multiplied by lifetime.
double vnr_energy(const VirtualNetwork& vn, std::span<const NodeId> node_map,
                  const SubstrateNetwork& sn, double lifetime);

/// Sum of values with time <= horizon, divided by horizon.
double long_term_average(std::span<const double> times, std::span<const double> values,
                         double horizon);

/// (sum of CPU + sum of bw * hop count) * lifetime.
double embedding_cost(const VirtualNetwork& vn, std::span<const int> hop_counts, double lifetime);
double embedding_cost(const Vnr& vnr, const Embedding& embedding);

/// Sum of CPU and bandwidth demands.
double revenue(const VirtualNetwork& vn);
inline double revenue(const Vnr& vnr) { return revenue(vnr.graph); }

/// alpha * energy + cost; lower is better.
double fitness(double energy, double cost, double alpha);

struct VnrAccounting {
  int vnr_id = 0;
  double energy = 0;
  double cost = 0;
  double revenue = 0;
  bool accepted = false;
};

}  // namespace vne
