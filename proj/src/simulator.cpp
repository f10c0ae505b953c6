#include "vne/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "vne/greedy.hpp"

namespace vne {

const char* to_string(EmbedderKind k) {
  switch (k) {
    case EmbedderKind::eapso: return "eapso";
    case EmbedderKind::greedy: return "greedy";
    case EmbedderKind::distributed: return "distributed";
  }
  return "unknown";
}

EmbedderKind parse_embedder(const std::string& name) {
  if (name == "eapso") return EmbedderKind::eapso;
  if (name == "greedy") return EmbedderKind::greedy;
  if (name == "distributed") return EmbedderKind::distributed;
  throw std::invalid_argument("unknown embedder '" + name + "'");
}

DataCenterSet single_center(SubstrateNetwork sn) {
  DataCenterSet dcs;
  dcs.add_center(std::move(sn), 0);
  return dcs;
}

namespace {

struct Later {
  bool operator()(const Event& l, const Event& r) const {
    if (l.time != r.time) return l.time > r.time;
    if (l.kind != r.kind) return l.kind > r.kind;
    return l.vnr_id > r.vnr_id;
  }
};

void log_single(VnrLogEntry& entry, const VirtualNetwork& vn, const Embedding& e) {
  for (std::size_t v = 0; v < vn.node_count(); ++v) {
    entry.nodes.push_back({0, static_cast<NodeId>(v), e.node_map[v], vn.nodes()[v].cpu_demand});
  }
  for (std::size_t l = 0; l < vn.link_count(); ++l) {
    entry.links.push_back({0, static_cast<LinkId>(l), e.link_map[l], -1, vn.links()[l].bw_demand});
  }
}

void log_distributed(VnrLogEntry& entry, const VirtualNetwork& vn, const DistributedOutcome& out) {
  for (const DistributedPart& p : out.parts) {
    for (std::size_t v = 0; v < p.sub.graph.node_count(); ++v) {
      entry.nodes.push_back({p.dc, p.sub.original_nodes[v], p.embedding.node_map[v],
                             p.sub.graph.nodes()[v].cpu_demand});
    }
    for (std::size_t l = 0; l < p.sub.graph.link_count(); ++l) {
      entry.links.push_back({p.dc, p.sub.original_links[l], p.embedding.link_map[l], -1,
                             p.sub.graph.links()[l].bw_demand});
    }
    entry.best_histories.push_back(p.best_history);
  }
  for (const InterDcReservation& r : out.inter) {
    entry.links.push_back({-1, r.virtual_link, {}, r.inter_link, r.bw});
  }
  std::sort(entry.nodes.begin(), entry.nodes.end(),
            [](const NodePlacement& a, const NodePlacement& b) { return a.vnode < b.vnode; });
  std::sort(entry.links.begin(), entry.links.end(),
            [](const LinkPlacement& a, const LinkPlacement& b) { return a.vlink < b.vlink; });
  (void)vn;
}

}  // namespace

SimulationResult run_simulation(DataCenterSet& state, const std::vector<Vnr>& workload,
                                const SimulationConfig& config, std::uint64_t seed,
                                const EventObserver& observer) {
  config.swarm.validate();
  if (!(config.bucket_width > 0)) throw std::invalid_argument("bucket width must be > 0");
  if (state.size() == 0) throw std::invalid_argument("no substrate");
  for (std::size_t i = 1; i < workload.size(); ++i) {
    if (workload[i].arrival_time < workload[i - 1].arrival_time) {
      throw std::invalid_argument("workload is not sorted by arrival time");
    }
  }
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < workload.size(); ++i) {
    validate_vnr(workload[i]);
    if (!index.emplace(workload[i].id, i).second) {
      throw std::invalid_argument("duplicate VNR id " + std::to_string(workload[i].id));
    }
  }

  std::priority_queue<Event, std::vector<Event>, Later> queue;
  for (const Vnr& v : workload) queue.push({v.arrival_time, Event::Kind::arrival, v.id});

  SimulationResult result;
  result.log.reserve(workload.size());
  std::map<int, ResidencyRecord> resident;

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    const Vnr& vnr = workload[index.at(ev.vnr_id)];

    if (ev.kind == Event::Kind::departure) {
      auto it = resident.find(ev.vnr_id);
      for (const auto& [dc, alloc] : it->second.allocations) release_allocation(state.center(dc).network, alloc);
      for (const InterDcReservation& r : it->second.inter) state.release_inter(r.inter_link, r.bw);
      resident.erase(it);
      if (observer) observer(ev, state, resident);
      continue;
    }

    VnrLogEntry entry;
    entry.vnr_id = vnr.id;
    entry.arrival = vnr.arrival_time;
    entry.lifetime = vnr.lifetime;
    entry.cpu_demand = vnr.graph.total_cpu();
    entry.bw_demand = vnr.graph.total_bw();
    entry.revenue = revenue(vnr);

    ResidencyRecord record;
    record.vnr_id = vnr.id;
    const std::uint64_t vseed = derive_seed(seed, static_cast<std::uint64_t>(vnr.id));
    const auto start = std::chrono::steady_clock::now();
    if (config.embedder == EmbedderKind::distributed) {
      DistributedOutcome out = embed_distributed(vnr, state, config.swarm, vseed);
      entry.embed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      if (out.accepted()) {
        entry.accepted = true;
        entry.energy = out.energy;
        entry.cost = out.cost;
        log_distributed(entry, vnr.graph, out);
        for (DistributedPart& p : out.parts) record.allocations.emplace_back(p.dc, std::move(p.allocation));
        record.inter = out.inter;
      } else {
        entry.reason = to_string(out.reason);
        for (const DistributedPart& p : out.parts) entry.best_histories.push_back(p.best_history);
      }
    } else {
      SubstrateNetwork& sn = state.center(0).network;
      EmbedOutcome out = config.embedder == EmbedderKind::greedy
                             ? greedy_embed(vnr, sn, config.swarm.max_hops, config.swarm.alpha)
                             : embed_eapso(vnr, sn, config.swarm, vseed);
      entry.embed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      entry.best_histories.push_back(out.best_history);
      if (out.accepted()) {
        entry.accepted = true;
        entry.energy = out.embedding->energy;
        entry.cost = out.embedding->cost;
        log_single(entry, vnr.graph, *out.embedding);
        record.allocations.emplace_back(0, apply_embedding(sn, vnr.graph, *out.embedding));
      } else {
        entry.reason = to_string(out.reason);
      }
    }

    record.accounting = {vnr.id, entry.energy, entry.cost, entry.revenue, entry.accepted};
    if (entry.accepted) {
      resident.emplace(vnr.id, std::move(record));
      queue.push({vnr.arrival_time + vnr.lifetime, Event::Kind::departure, vnr.id});
    }
    result.log.push_back(std::move(entry));
    if (observer) observer(ev, state, resident);
  }

  const CapacityTotals totals = capacity_totals(state);
  result.series = metrics_from_log(result.log, config.bucket_width, &totals);
  return result;
}

double acceptance_ratio(const std::vector<VnrLogEntry>& log, double t) {
  int arrived = 0;
  int accepted = 0;
  for (const VnrLogEntry& e : log) {
    if (e.arrival > t) continue;
    ++arrived;
    accepted += e.accepted;
  }
  return arrived == 0 ? 0.0 : static_cast<double>(accepted) / arrived;
}

double achieved_resources(const std::vector<VnrLogEntry>& log, double t0, double t1) {
  double sum = 0;
  for (const VnrLogEntry& e : log) {
    if (e.accepted && e.arrival >= t0 && e.arrival < t1) sum += e.revenue;
  }
  return sum;
}

double rejected_resources(const std::vector<VnrLogEntry>& log, double t0, double t1) {
  double sum = 0;
  for (const VnrLogEntry& e : log) {
    if (!e.accepted && e.arrival >= t0 && e.arrival < t1) sum += e.revenue;
  }
  return sum;
}

double rc_ratio(const std::vector<VnrLogEntry>& log, double t) {
  double rev = 0;
  double cost = 0;
  for (const VnrLogEntry& e : log) {
    if (!e.accepted || e.arrival > t) continue;
    rev += e.revenue;
    cost += e.cost;
  }
  return cost > 0 ? rev / cost : 0.0;
}

CapacityTotals capacity_totals(const DataCenterSet& dcs) {
  CapacityTotals t;
  for (const DataCenter& dc : dcs.centers()) {
    for (const SubstrateNode& n : dc.network.nodes()) t.cpu += n.cpu_capacity;
    for (const SubstrateLink& l : dc.network.links()) t.bw += l.bw_capacity;
    t.nodes += dc.network.node_count();
    t.links += dc.network.link_count();
  }
  return t;
}

std::vector<MetricsRow> metrics_from_log(const std::vector<VnrLogEntry>& log, double bucket_width,
                                         const CapacityTotals* capacity) {
  if (!(bucket_width > 0)) throw std::invalid_argument("bucket width must be > 0");
  std::vector<MetricsRow> rows;
  if (log.empty()) return rows;

  double horizon = 0;
  for (const VnrLogEntry& e : log) {
    horizon = std::max(horizon, e.arrival + e.lifetime);
  }
  const auto n_buckets = static_cast<std::size_t>(std::floor(horizon / bucket_width)) + 1;
  rows.resize(n_buckets);
  std::vector<double> embed_ms(n_buckets, 0);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    rows[b].bucket_start = static_cast<double>(b) * bucket_width;
    rows[b].bucket_end = static_cast<double>(b + 1) * bucket_width;
  }
  for (const VnrLogEntry& e : log) {
    const auto b = static_cast<std::size_t>(std::floor(e.arrival / bucket_width));
    MetricsRow& r = rows[b];
    ++r.arrived;
    embed_ms[b] += e.embed_ms;
    if (e.accepted) {
      ++r.accepted;
      r.energy += e.energy;
      r.achieved_resources += e.revenue;
      r.revenue += e.revenue;
    } else {
      r.rejected_resources += e.revenue;
    }
  }

  int cum_arrived = 0;
  int cum_accepted = 0;
  double cum_revenue = 0;
  double cum_cost = 0;
  std::size_t next = 0;  // log is in arrival order
  for (std::size_t b = 0; b < n_buckets; ++b) {
    MetricsRow& r = rows[b];
    while (next < log.size() && log[next].arrival < r.bucket_end) {
      const VnrLogEntry& e = log[next++];
      ++cum_arrived;
      if (e.accepted) {
        ++cum_accepted;
        cum_revenue += e.revenue;
        cum_cost += e.cost;
      }
    }
    r.acceptance_ratio = cum_arrived ? static_cast<double>(cum_accepted) / cum_arrived : 0.0;
    r.bucket_acceptance_ratio = r.arrived ? static_cast<double>(r.accepted) / r.arrived : 0.0;
    r.long_term_revenue = cum_revenue / r.bucket_end;
    r.rc_ratio = cum_cost > 0 ? cum_revenue / cum_cost : 0.0;
    r.mean_embed_ms = r.arrived ? embed_ms[b] / r.arrived : 0.0;

    if (capacity && capacity->nodes > 0) {
      // Resident at the sampling instant: arrived before the bucket end and
      // not yet departed (departures at exactly bucket_end are still pending).
      double cpu = 0;
      double bw = 0;
      for (const VnrLogEntry& e : log) {
        if (!e.accepted || e.arrival >= r.bucket_end || e.arrival + e.lifetime < r.bucket_end) continue;
        for (const NodePlacement& n : e.nodes) cpu += n.cpu;
        for (const LinkPlacement& l : e.links) bw += l.bw * static_cast<double>(l.path.size());
      }
      r.mean_available_cpu = (capacity->cpu - cpu) / static_cast<double>(capacity->nodes);
      if (capacity->links > 0) {
        r.mean_available_bw = (capacity->bw - bw) / static_cast<double>(capacity->links);
      }
    }
  }
  return rows;
}

}  // namespace vne
