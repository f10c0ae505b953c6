#include "vne/energy.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/kernels.hpp"

namespace vne {

PowerBreakdown node_power(const SubstrateNode& host, std::span<const double> hosted_cpu_demands,
                          bool newly_powered) {
  const double load = kernels::active().sum(hosted_cpu_demands);
  if (load > host.cpu_capacity) {
    throw std::invalid_argument("hosted demand exceeds capacity of node " + std::to_string(host.id));
  }
  PowerBreakdown p;
  if (!hosted_cpu_demands.empty() && host.cpu_capacity > 0) {
    p.dynamic_watts = load / host.cpu_capacity * host.power_dynamic_range();
  }
  p.baseline_watts = newly_powered ? host.power_baseline : 0.0;
  p.total_watts = p.dynamic_watts + p.baseline_watts;
  return p;
}

double vnr_energy(const VirtualNetwork& vn, std::span<const NodeId> node_map,
                  const SubstrateNetwork& sn, double lifetime) {
  if (node_map.size() != vn.node_count()) throw std::invalid_argument("node_map size mismatch");
  std::map<NodeId, std::vector<double>> per_host;
  for (std::size_t v = 0; v < node_map.size(); ++v) {
    const NodeId s = node_map[v];
    if (s < 0 || static_cast<std::size_t>(s) >= sn.node_count()) {
      throw std::invalid_argument("virtual node " + std::to_string(v) + " mapped to unknown host");
    }
    per_host[s].push_back(vn.nodes()[v].cpu_demand);
  }
  double watts = 0;
  for (const auto& [s, demands] : per_host) {
    const SubstrateNode& host = sn.node(s);
    if (kernels::active().sum(demands) > host.cpu_available) {
      throw std::invalid_argument("mapping oversubscribes node " + std::to_string(s));
    }
    watts += node_power(host, demands, !host.powered_on).total_watts;
  }
  return watts * lifetime;
}

double long_term_average(std::span<const double> times, std::span<const double> values,
                         double horizon) {
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be > 0");
  if (times.size() != values.size()) throw std::invalid_argument("series length mismatch");
  return kernels::active().sum_where_le(times, values, horizon) / horizon;
}

double embedding_cost(const VirtualNetwork& vn, std::span<const int> hop_counts, double lifetime) {
  if (hop_counts.size() != vn.link_count()) throw std::invalid_argument("incomplete link mapping");
  double link_term = 0;
  for (std::size_t l = 0; l < hop_counts.size(); ++l) {
    link_term += vn.links()[l].bw_demand * hop_counts[l];
  }
  return (vn.total_cpu() + link_term) * lifetime;
}

double embedding_cost(const Vnr& vnr, const Embedding& embedding) {
  if (embedding.node_map.size() != vnr.graph.node_count()) {
    throw std::invalid_argument("incomplete node mapping");
  }
  if (embedding.link_map.size() != vnr.graph.link_count()) {
    throw std::invalid_argument("incomplete link mapping");
  }
  std::vector<int> hops;
  hops.reserve(embedding.link_map.size());
  for (const Path& p : embedding.link_map) hops.push_back(static_cast<int>(p.size()));
  return embedding_cost(vnr.graph, hops, vnr.lifetime);
}

double revenue(const VirtualNetwork& vn) { return vn.total_cpu() + vn.total_bw(); }

double fitness(double energy, double cost, double alpha) { return alpha * energy + cost; }

}  // namespace vne
