#include "vne/partition.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "vne/energy.hpp"

namespace vne {

namespace {

struct Group {
  std::vector<NodeId> members;
  double weight = 0;
  long long internal_links = 0;
};

struct Crossing {
  long long count = 0;
  double bw = 0;
};

/// density(l) > density(r) for edge counts e over k members, compared exactly.
bool denser(long long el, long long kl, long long er, long long kr) {
  return el * kr * (kr - 1) > er * kl * (kl - 1);
}

}  // namespace

CoarseGraph coarsen_hcm(const VirtualNetwork& vn, double min_resource) {
  const std::size_t n = vn.node_count();
  for (const VirtualNode& v : vn.nodes()) {
    if (v.cpu_demand > min_resource) {
      throw CoarseningError("virtual node " + std::to_string(v.id) + " demands " +
                            std::to_string(v.cpu_demand) + " > min_resource " + std::to_string(min_resource));
    }
  }

  std::vector<Group> groups(n);
  std::vector<int> owner(n);
  for (std::size_t i = 0; i < n; ++i) {
    groups[i].members = {static_cast<NodeId>(i)};
    groups[i].weight = vn.nodes()[i].cpu_demand;
    owner[i] = static_cast<int>(i);
  }

  for (;;) {
    std::vector<int> visit(groups.size());
    std::iota(visit.begin(), visit.end(), 0);
    std::stable_sort(visit.begin(), visit.end(), [&](int l, int r) {
      return groups[static_cast<std::size_t>(l)].weight > groups[static_cast<std::size_t>(r)].weight;
    });
    std::vector<int> partner(groups.size(), -1);
    std::vector<char> matched(groups.size(), 0);
    std::vector<long long> union_links(groups.size(), 0);
    bool merged = false;
    for (int g : visit) {
      const auto gi = static_cast<std::size_t>(g);
      if (matched[gi]) continue;
      std::map<int, Crossing> crossing;
      for (NodeId m : groups[gi].members) {
        for (const Adjacent& e : vn.neighbors(m)) {
          const int h = owner[static_cast<std::size_t>(e.node)];
          if (h == g) continue;
          Crossing& c = crossing[h];
          ++c.count;
          c.bw += vn.link(e.link).bw_demand;
        }
      }
      int best = -1;
      long long best_e = 0;
      long long best_k = 0;
      double best_bw = 0;
      for (const auto& [h, c] : crossing) {
        const auto hi = static_cast<std::size_t>(h);
        if (matched[hi] || groups[gi].weight + groups[hi].weight > min_resource) continue;
        const long long e = groups[gi].internal_links + groups[hi].internal_links + c.count;
        const auto k = static_cast<long long>(groups[gi].members.size() + groups[hi].members.size());
        // std::map iterates h ascending, so strict comparisons keep the lower id on ties.
        if (best < 0 || denser(e, k, best_e, best_k) ||
            (!denser(best_e, best_k, e, k) && c.bw > best_bw)) {
          best = h;
          best_e = e;
          best_k = k;
          best_bw = c.bw;
        }
      }
      if (best >= 0) {
        matched[gi] = matched[static_cast<std::size_t>(best)] = 1;
        partner[gi] = best;
        partner[static_cast<std::size_t>(best)] = g;
        union_links[gi] = union_links[static_cast<std::size_t>(best)] = best_e;
        merged = true;
      }
    }
    if (!merged) break;

    std::vector<Group> next;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const int p = partner[g];
      if (p >= 0 && static_cast<std::size_t>(p) < g) continue;
      Group out = groups[g];
      if (p >= 0) {
        const Group& other = groups[static_cast<std::size_t>(p)];
        out.members.insert(out.members.end(), other.members.begin(), other.members.end());
        std::sort(out.members.begin(), out.members.end());
        out.weight += other.weight;
        out.internal_links = union_links[g];
      }
      next.push_back(std::move(out));
    }
    std::sort(next.begin(), next.end(),
              [](const Group& l, const Group& r) { return l.members.front() < r.members.front(); });
    groups = std::move(next);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (NodeId m : groups[g].members) owner[static_cast<std::size_t>(m)] = static_cast<int>(g);
    }
  }

  CoarseGraph cg;
  cg.owner = owner;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    CoarseNode node{static_cast<int>(g), groups[g].members, 0};
    for (NodeId m : node.members) node.weight += vn.node(m).cpu_demand;
    cg.nodes.push_back(std::move(node));
  }
  std::map<std::pair<int, int>, double> agg;
  for (const VirtualLink& l : vn.links()) {
    int a = owner[static_cast<std::size_t>(l.a)];
    int b = owner[static_cast<std::size_t>(l.b)];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    agg[{a, b}] += l.bw_demand;
  }
  for (const auto& [key, bw] : agg) cg.links.push_back({key.first, key.second, bw});
  return cg;
}

std::vector<NodeId> uncoarsen(const CoarseNode& node) { return node.members; }

Subgraph construct_subgraph(std::span<const NodeId> members, const VirtualNetwork& vn) {
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<NodeId> local(vn.node_count(), -1);
  Subgraph sub;
  for (NodeId m : sorted) {
    if (m < 0 || static_cast<std::size_t>(m) >= vn.node_count()) {
      throw std::invalid_argument("unknown virtual node " + std::to_string(m));
    }
    const VirtualNode& v = vn.node(m);
    local[static_cast<std::size_t>(m)] = sub.graph.add_node(v.cpu_demand, v.x, v.y);
    sub.original_nodes.push_back(m);
  }
  for (std::size_t l = 0; l < vn.link_count(); ++l) {
    const VirtualLink& vl = vn.links()[l];
    const NodeId a = local[static_cast<std::size_t>(vl.a)];
    const NodeId b = local[static_cast<std::size_t>(vl.b)];
    if (a < 0 || b < 0) continue;
    sub.graph.add_link(a, b, vl.bw_demand);
    sub.original_links.push_back(static_cast<LinkId>(l));
  }
  return sub;
}

int DataCenterSet::add_center(SubstrateNetwork network, NodeId gateway) {
  if (gateway < 0 || static_cast<std::size_t>(gateway) >= network.node_count()) {
    throw std::invalid_argument("gateway node does not exist in its data center");
  }
  const auto id = static_cast<int>(centers_.size());
  network.set_dc(id);
  centers_.push_back({std::move(network), gateway});
  return id;
}

int DataCenterSet::add_link(int a, int b, double bw_capacity) {
  const auto n = static_cast<int>(centers_.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument("bad inter-DC link endpoints");
  if (find_link(a, b)) throw std::invalid_argument("parallel inter-DC link");
  if (!(bw_capacity >= 0)) throw std::invalid_argument("negative inter-DC bandwidth");
  const double bw = quantize(bw_capacity);
  links_.push_back({a, b, bw, bw});
  return static_cast<int>(links_.size()) - 1;
}

std::optional<int> DataCenterSet::find_link(int a, int b) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if ((links_[i].a == a && links_[i].b == b) || (links_[i].a == b && links_[i].b == a)) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

double DataCenterSet::available_cpu(int id) const {
  double sum = 0;
  for (const SubstrateNode& n : center(id).network.nodes()) sum += n.cpu_available;
  return sum;
}

void DataCenterSet::reserve_inter(int link, double amount) {
  InterDcLink& l = links_.at(static_cast<std::size_t>(link));
  if (amount > l.bw_available) throw std::logic_error("inter-DC over-reservation");
  l.bw_available -= amount;
}

void DataCenterSet::release_inter(int link, double amount) {
  InterDcLink& l = links_.at(static_cast<std::size_t>(link));
  if (l.bw_available + amount > l.bw_capacity) throw std::logic_error("inter-DC over-release");
  l.bw_available += amount;
}

DataCenterSnapshot DataCenterSet::snapshot() const {
  DataCenterSnapshot s;
  for (const DataCenter& dc : centers_) s.centers.push_back(dc.network.snapshot());
  for (const InterDcLink& l : links_) s.inter_available.push_back(l.bw_available);
  return s;
}

void DataCenterSet::restore(const DataCenterSnapshot& s) {
  if (s.centers.size() != centers_.size() || s.inter_available.size() != links_.size()) {
    throw std::invalid_argument("snapshot does not match data-center layout");
  }
  for (std::size_t i = 0; i < centers_.size(); ++i) centers_[i].network.restore(s.centers[i]);
  for (std::size_t i = 0; i < links_.size(); ++i) links_[i].bw_available = s.inter_available[i];
}

void DataCenterSet::validate() const {
  for (const DataCenter& dc : centers_) {
    dc.network.validate();
    if (dc.gateway < 0 || static_cast<std::size_t>(dc.gateway) >= dc.network.node_count()) {
      throw std::logic_error("gateway missing from its data center");
    }
  }
  for (const InterDcLink& l : links_) {
    if (l.bw_available < 0 || l.bw_available > l.bw_capacity) {
      throw std::logic_error("inter-DC bw_available outside [0, capacity]");
    }
  }
}

std::optional<int> assign(const VirtualNetwork& sub, const DataCenterSet& dcs,
                          std::span<const double> pending) {
  const double demand = sub.total_cpu();
  std::optional<int> best;
  double best_left = 0;
  std::vector<NodeId> order(sub.node_count());
  std::iota(order.begin(), order.end(), 0);
  for (int d = 0; d < static_cast<int>(dcs.size()); ++d) {
    double avail = dcs.available_cpu(d);
    if (static_cast<std::size_t>(d) < pending.size()) avail -= pending[static_cast<std::size_t>(d)];
    if (avail < demand) continue;
    if (build_candidate_lists(sub, order, dcs.center(d).network).any_empty()) continue;
    const double left = avail - demand;
    if (!best || left < best_left) {
      best = d;
      best_left = left;
    }
  }
  return best;
}

double min_available_cpu(const DataCenterSet& dcs) {
  double m = std::numeric_limits<double>::infinity();
  for (int d = 0; d < static_cast<int>(dcs.size()); ++d) m = std::min(m, dcs.available_cpu(d));
  return m;
}

std::vector<int> coarse_bfs_order(const CoarseGraph& cg) {
  const std::size_t n = cg.nodes.size();
  std::vector<std::vector<int>> adj(n);
  for (const CoarseLink& l : cg.links) {
    adj[static_cast<std::size_t>(l.a)].push_back(l.b);
    adj[static_cast<std::size_t>(l.b)].push_back(l.a);
  }
  const auto heavier = [&](int l, int r) {
    const double wl = cg.nodes[static_cast<std::size_t>(l)].weight;
    const double wr = cg.nodes[static_cast<std::size_t>(r)].weight;
    return wl != wr ? wl > wr : l < r;
  };

  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const auto c = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = c;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      comps.back().push_back(u);
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = c;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<double> comp_weight(comps.size(), 0);
  std::vector<int> comp_min(comps.size(), 0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int u : comps[c]) comp_weight[c] += cg.nodes[static_cast<std::size_t>(u)].weight;
    comp_min[c] = *std::min_element(comps[c].begin(), comps[c].end());
  }
  std::vector<std::size_t> comp_order(comps.size());
  std::iota(comp_order.begin(), comp_order.end(), 0);
  std::sort(comp_order.begin(), comp_order.end(), [&](std::size_t l, std::size_t r) {
    return comp_weight[l] != comp_weight[r] ? comp_weight[l] > comp_weight[r] : comp_min[l] < comp_min[r];
  });

  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (std::size_t c : comp_order) {
    const int root = *std::min_element(comps[c].begin(), comps[c].end(), heavier);
    std::vector<int> level{root};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!level.empty()) {
      std::sort(level.begin(), level.end(), heavier);
      order.insert(order.end(), level.begin(), level.end());
      std::vector<int> next;
      for (int u : level) {
        for (int v : adj[static_cast<std::size_t>(u)]) {
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            next.push_back(v);
          }
        }
      }
      level = std::move(next);
    }
  }
  return order;
}

const char* to_string(DistributedReject r) {
  switch (r) {
    case DistributedReject::none: return "none";
    case DistributedReject::unsatisfiable: return "unsatisfiable";
    case DistributedReject::no_datacenter: return "no_datacenter";
    case DistributedReject::inter_dc_bandwidth: return "inter_dc_bandwidth";
    case DistributedReject::embedding_failed: return "embedding_failed";
  }
  return "unknown";
}

namespace {

/// Connected components of a node subset, each sorted, ordered by smallest member.
std::vector<std::vector<NodeId>> components_within(const VirtualNetwork& vn,
                                                   const std::vector<NodeId>& members) {
  std::vector<char> in(vn.node_count(), 0);
  for (NodeId m : members) in[static_cast<std::size_t>(m)] = 1;
  std::vector<char> seen(vn.node_count(), 0);
  std::vector<std::vector<NodeId>> out;
  for (NodeId s : members) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<NodeId> comp;
    std::vector<NodeId> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const Adjacent& e : vn.neighbors(u)) {
        const auto v = static_cast<std::size_t>(e.node);
        if (in[v] && !seen[v]) {
          seen[v] = 1;
          stack.push_back(e.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DistributedOutcome embed_distributed(const Vnr& vnr, DataCenterSet& dcs, const SwarmParams& params,
                                     std::uint64_t seed, const DistributedOptions& options) {
  params.validate();
  validate_vnr(vnr);
  const VirtualNetwork& vn = vnr.graph;
  DistributedOutcome out;

  CoarseGraph cg;
  try {
    cg = coarsen_hcm(vn, min_available_cpu(dcs));
  } catch (const CoarseningError&) {
    out.reason = DistributedReject::unsatisfiable;
    return out;
  }

  // Assignment is decided before anything is reserved.
  out.coarse_assignment.assign(cg.nodes.size(), -1);
  std::vector<double> pending(dcs.size(), 0);
  std::vector<int> dc_first_use;
  for (int c : coarse_bfs_order(cg)) {
    const CoarseNode& node = cg.nodes[static_cast<std::size_t>(c)];
    const Subgraph sub = construct_subgraph(uncoarsen(node), vn);
    const auto dc = assign(sub.graph, dcs, pending);
    if (!dc) {
      out.reason = DistributedReject::no_datacenter;
      out.coarse_assignment.clear();
      return out;
    }
    out.coarse_assignment[static_cast<std::size_t>(c)] = *dc;
    pending[static_cast<std::size_t>(*dc)] += node.weight;
    if (std::find(dc_first_use.begin(), dc_first_use.end(), *dc) == dc_first_use.end()) {
      dc_first_use.push_back(*dc);
    }
  }
  std::vector<int> node_dc(vn.node_count());
  for (std::size_t v = 0; v < vn.node_count(); ++v) {
    node_dc[v] = out.coarse_assignment[static_cast<std::size_t>(cg.owner[v])];
  }

  const DataCenterSnapshot before = dcs.snapshot();
  const auto fail = [&](DistributedReject why) {
    dcs.restore(before);
    DistributedOutcome r;
    r.reason = why;
    r.coarse_assignment = out.coarse_assignment;
    return r;
  };

  double cut_bw = 0;
  for (std::size_t l = 0; l < vn.link_count(); ++l) {
    const VirtualLink& vl = vn.links()[l];
    const int da = node_dc[static_cast<std::size_t>(vl.a)];
    const int db = node_dc[static_cast<std::size_t>(vl.b)];
    if (da == db) continue;
    const auto link = dcs.find_link(da, db);
    if (!link || dcs.links()[static_cast<std::size_t>(*link)].bw_available < vl.bw_demand) {
      return fail(DistributedReject::inter_dc_bandwidth);
    }
    dcs.reserve_inter(*link, vl.bw_demand);
    out.inter.push_back({static_cast<LinkId>(l), *link, vl.bw_demand});
    cut_bw += vl.bw_demand;
  }

  // Virtual nodes sharing a data center are embedded together, one
  // connected piece at a time.
  std::uint64_t part_seq = 0;
  for (int dc : dc_first_use) {
    std::vector<NodeId> members;
    for (std::size_t v = 0; v < vn.node_count(); ++v) {
      if (node_dc[v] == dc) members.push_back(static_cast<NodeId>(v));
    }
    for (const auto& piece : components_within(vn, members)) {
      const std::size_t index = out.parts.size();
      if (options.fail_part && options.fail_part(index)) return fail(DistributedReject::embedding_failed);
      DistributedPart part;
      part.dc = dc;
      part.sub = construct_subgraph(piece, vn);
      Vnr piece_vnr{vnr.id, part.sub.graph, vnr.arrival_time, vnr.lifetime};
      const std::uint64_t piece_seed = part_seq == 0 ? seed : derive_seed(seed, part_seq);
      ++part_seq;
      SubstrateNetwork& sn = dcs.center(dc).network;
      EmbedOutcome r = embed_eapso(piece_vnr, sn, params, piece_seed);
      if (!r.accepted()) return fail(DistributedReject::embedding_failed);
      part.embedding = std::move(*r.embedding);
      part.best_history = std::move(r.best_history);
      part.allocation = apply_embedding(sn, part.sub.graph, part.embedding);
      out.energy += part.embedding.energy;
      out.cost += part.embedding.cost;
      out.parts.push_back(std::move(part));
    }
  }
  // Each cut link is charged one hop: the inter-DC link.
  out.cost += cut_bw * vnr.lifetime;
  out.fitness = vne::fitness(out.energy, out.cost, params.alpha);
  return out;
}

void release_distributed(DataCenterSet& dcs, const DistributedOutcome& outcome) {
  for (const DistributedPart& p : outcome.parts) release_allocation(dcs.center(p.dc).network, p.allocation);
  for (const InterDcReservation& r : outcome.inter) dcs.release_inter(r.inter_link, r.bw);
}

}  // namespace vne
