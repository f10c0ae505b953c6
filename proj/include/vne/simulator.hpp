#pragma once

// Discrete-event replay of a request workload against substrate state.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vne/allocation.hpp"
#include "vne/energy.hpp"
#include "vne/partition.hpp"
#include "vne/pso.hpp"

namespace vne {

enum class EmbedderKind { eapso, greedy, distributed };
const char* to_string(EmbedderKind k);
EmbedderKind parse_embedder(const std::string& name);

struct SimulationConfig {
  EmbedderKind embedder = EmbedderKind::eapso;
  SwarmParams swarm;
  double bucket_width = 1000;
};

struct Event {
  enum class Kind { departure = 0, arrival = 1 };  // departures first on ties
  double time = 0;
  Kind kind = Kind::arrival;
  int vnr_id = 0;
};

struct NodePlacement {
  int dc = 0;
  NodeId vnode = 0;
  NodeId host = 0;
  double cpu = 0;
};

struct LinkPlacement {
  int dc = 0;         // -1 for a cut link carried between data centers
  LinkId vlink = 0;
  Path path;
  int inter_link = -1;
  double bw = 0;
};

struct VnrLogEntry {
  int vnr_id = 0;
  double arrival = 0;
  double lifetime = 0;
  bool accepted = false;
  std::string reason;  // empty when accepted
  double energy = 0;
  double cost = 0;
  double revenue = 0;  // demanded CPU + bandwidth, also for rejected requests
  double cpu_demand = 0;
  double bw_demand = 0;
  double embed_ms = 0;
  std::vector<NodePlacement> nodes;
  std::vector<LinkPlacement> links;
  std::vector<std::vector<double>> best_histories;  // one per swarm search
};

/// What an accepted request holds while resident.
struct ResidencyRecord {
  int vnr_id = 0;
  std::vector<std::pair<int, Allocation>> allocations;  // per data center
  std::vector<InterDcReservation> inter;
  VnrAccounting accounting;
};

struct MetricsRow {
  double bucket_start = 0;
  double bucket_end = 0;
  int arrived = 0;
  int accepted = 0;
  double energy = 0;                 // charged to requests accepted in the bucket
  double acceptance_ratio = 0;       // cumulative from t = 0
  double bucket_acceptance_ratio = 0;
  double achieved_resources = 0;
  double rejected_resources = 0;
  double revenue = 0;
  double long_term_revenue = 0;      // cumulative revenue / bucket_end
  double rc_ratio = 0;               // cumulative revenue / cumulative cost
  double mean_available_cpu = 0;     // state at bucket end
  double mean_available_bw = 0;
  double mean_embed_ms = 0;
};

struct SimulationResult {
  std::vector<MetricsRow> series;
  std::vector<VnrLogEntry> log;  // in arrival order
};

using EventObserver =
    std::function<void(const Event&, const DataCenterSet&, const std::map<int, ResidencyRecord>&)>;

/// Replays the workload. Single-substrate embedders use data center 0.
/// `state` is left as it is after the final event. The observer, if any, is
/// called after every event.
SimulationResult run_simulation(DataCenterSet& state, const std::vector<Vnr>& workload,
                                const SimulationConfig& config, std::uint64_t seed,
                                const EventObserver& observer = {});

DataCenterSet single_center(SubstrateNetwork sn);

/// accepted / arrived among requests with arrival <= t; 0 when none arrived.
double acceptance_ratio(const std::vector<VnrLogEntry>& log, double t);
/// Demanded CPU + bandwidth of accepted requests arriving in [t0, t1).
double achieved_resources(const std::vector<VnrLogEntry>& log, double t0, double t1);
/// Same for rejected requests.
double rejected_resources(const std::vector<VnrLogEntry>& log, double t0, double t1);
/// Revenue / cost over accepted requests with arrival <= t; 0 when no cost.
double rc_ratio(const std::vector<VnrLogEntry>& log, double t);

/// Aggregate capacity of the substrate a log was produced on.
struct CapacityTotals {
  double cpu = 0;
  std::size_t nodes = 0;
  double bw = 0;  // intra-DC links only
  std::size_t links = 0;
};
CapacityTotals capacity_totals(const DataCenterSet& dcs);

/// Rebuilds the per-bucket metrics from the log alone. Available-resource
/// columns are derived by replaying the logged allocations against
/// `capacity` and stay zero without it.
std::vector<MetricsRow> metrics_from_log(const std::vector<VnrLogEntry>& log, double bucket_width,
                                         const CapacityTotals* capacity = nullptr);

}  // namespace vne
