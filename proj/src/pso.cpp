#include "vne/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vne/energy.hpp"
#include "vne/kernels.hpp"

namespace vne {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Graph, class Score>
std::vector<NodeId> leveled_bfs(const Graph& g, Score score, bool require_connected) {
  const std::size_t n = g.node_count();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = score(static_cast<NodeId>(i));
  const auto by_score = [&](NodeId l, NodeId r) {
    const double sl = s[static_cast<std::size_t>(l)];
    const double sr = s[static_cast<std::size_t>(r)];
    return sl != sr ? sl > sr : l < r;
  };

  std::vector<char> seen(n, 0);
  std::vector<NodeId> order;
  order.reserve(n);
  while (order.size() < n) {
    NodeId root = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i] && (root < 0 || by_score(static_cast<NodeId>(i), root))) root = static_cast<NodeId>(i);
    }
    if (!order.empty() && require_connected) {
      throw std::invalid_argument("virtual network is disconnected");
    }
    std::vector<NodeId> level{root};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!level.empty()) {
      std::sort(level.begin(), level.end(), by_score);
      order.insert(order.end(), level.begin(), level.end());
      std::vector<NodeId> next;
      for (NodeId u : level) {
        for (const Adjacent& e : g.neighbors(u)) {
          if (!seen[static_cast<std::size_t>(e.node)]) {
            seen[static_cast<std::size_t>(e.node)] = 1;
            next.push_back(e.node);
          }
        }
      }
      level = std::move(next);
    }
  }
  return order;
}

std::vector<LinkId> links_by_demand(const VirtualNetwork& vn) {
  std::vector<LinkId> order(vn.link_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<LinkId>(i);
  std::stable_sort(order.begin(), order.end(), [&](LinkId l, LinkId r) {
    return vn.link(l).bw_demand > vn.link(r).bw_demand;
  });
  return order;
}

/// CPU check plus cumulative link routing. `load` and `touched` are scratch
/// buffers; on return `touched` lists hosts with their summed demand in `load`.
bool place_and_route(std::span<const NodeId> node_map, const VirtualNetwork& vn,
                     const SubstrateNetwork& sn, int max_hops, std::span<const LinkId> link_order,
                     PathFinder& finder, std::vector<double>& residual, std::vector<double>& load,
                     std::vector<NodeId>& touched, std::vector<Path>& paths) {
  if (node_map.size() != vn.node_count()) throw std::invalid_argument("node_map size mismatch");
  for (NodeId s : touched) load[static_cast<std::size_t>(s)] = 0;
  touched.clear();
  for (std::size_t v = 0; v < node_map.size(); ++v) {
    const NodeId s = node_map[v];
    if (s < 0 || static_cast<std::size_t>(s) >= sn.node_count()) {
      throw std::invalid_argument("node_map entry out of range");
    }
    double& l = load[static_cast<std::size_t>(s)];
    if (l == 0) touched.push_back(s);
    l += vn.nodes()[v].cpu_demand;
  }
  for (NodeId s : touched) {
    if (load[static_cast<std::size_t>(s)] > sn.node(s).cpu_available) return false;
  }

  residual.resize(sn.link_count());
  for (std::size_t i = 0; i < sn.link_count(); ++i) residual[i] = sn.links()[i].bw_available;
  paths.assign(vn.link_count(), Path{});
  for (LinkId l : link_order) {
    const VirtualLink& vl = vn.link(l);
    const NodeId a = node_map[static_cast<std::size_t>(vl.a)];
    const NodeId b = node_map[static_cast<std::size_t>(vl.b)];
    if (a == b) continue;
    auto path = finder.find(a, b, vl.bw_demand, residual, max_hops);
    if (!path) return false;
    for (LinkId sl : *path) residual[static_cast<std::size_t>(sl)] -= vl.bw_demand;
    paths[static_cast<std::size_t>(l)] = std::move(*path);
  }
  return true;
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

bool CandidateLists::any_empty() const {
  return std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); });
}

NoCandidateError::NoCandidateError(std::size_t dimension)
    : std::runtime_error("no candidate host for dimension " + std::to_string(dimension)),
      dimension_(dimension) {}

std::vector<NodeId> virtual_bfs_order(const VirtualNetwork& vn) {
  return leveled_bfs(vn, [&](NodeId v) { return vn.total_resource(v); }, true);
}

std::vector<NodeId> substrate_bfs_order(const SubstrateNetwork& sn) {
  return leveled_bfs(sn, [&](NodeId s) { return sn.total_resource(s); }, false);
}

CandidateLists build_candidate_lists(const VirtualNetwork& vn, std::span<const NodeId> order,
                                     const SubstrateNetwork& sn) {
  check_dims(order.size(), vn.node_count());
  const std::vector<NodeId> sub_order = substrate_bfs_order(sn);
  std::vector<double> cpu(sub_order.size());
  std::vector<double> bw(sub_order.size());
  for (std::size_t i = 0; i < sub_order.size(); ++i) {
    cpu[i] = sn.node(sub_order[i]).cpu_available;
    bw[i] = sn.incident_bw_available(sub_order[i]);
  }
  std::vector<std::uint8_t> mask(sub_order.size());
  CandidateLists out;
  out.order.assign(order.begin(), order.end());
  out.lists.resize(order.size());
  for (std::size_t d = 0; d < order.size(); ++d) {
    const NodeId v = order[d];
    const std::size_t count =
        kernels::active().screen(cpu, bw, vn.node(v).cpu_demand, vn.incident_bw_demand(v), mask);
    auto& list = out.lists[d];
    list.reserve(count);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) list.push_back(sub_order[i]);
    }
  }
  return out;
}

Position init_position(const CandidateLists& cands, const VirtualNetwork& vn,
                       const SubstrateNetwork& sn, Rng& rng, InitSampling sampling) {
  std::vector<double> remaining(sn.node_count());
  for (std::size_t s = 0; s < sn.node_count(); ++s) remaining[s] = sn.nodes()[s].cpu_available;

  Position pos;
  pos.hosts.reserve(cands.dims());
  std::vector<NodeId> eligible;
  std::vector<double> weight;
  for (std::size_t d = 0; d < cands.dims(); ++d) {
    const double demand = vn.node(cands.order[d]).cpu_demand;
    eligible.clear();
    weight.clear();
    for (NodeId s : cands.lists[d]) {
      const double left = remaining[static_cast<std::size_t>(s)];
      if (left < demand) continue;
      eligible.push_back(s);
      weight.push_back(left + sn.incident_bw_available(s));
    }
    if (eligible.empty()) throw NoCandidateError(d);

    std::size_t pick = 0;
    if (sampling == InitSampling::uniform) {
      pick = static_cast<std::size_t>(rng.below(eligible.size()));
    } else {
      const double total = kernels::active().sum(weight);
      double r = rng.uniform() * total;
      pick = eligible.size() - 1;
      for (std::size_t i = 0; i < weight.size(); ++i) {
        if (r < weight[i]) {
          pick = i;
          break;
        }
        r -= weight[i];
      }
    }
    const NodeId chosen = eligible[pick];
    remaining[static_cast<std::size_t>(chosen)] -= demand;
    pos.hosts.push_back(chosen);
  }
  return pos;
}

Position init_position(const CandidateLists& cands, const VirtualNetwork& vn,
                       const SubstrateNetwork& sn, std::uint64_t seed, InitSampling sampling) {
  Rng rng(seed);
  return init_position(cands, vn, sn, rng, sampling);
}

Velocity random_velocity(const CandidateLists& cands, Rng& rng) {
  Velocity v;
  v.moves.reserve(cands.dims());
  for (const auto& list : cands.lists) {
    if (list.empty()) throw NoCandidateError(v.moves.size());
    v.moves.push_back(list[static_cast<std::size_t>(rng.below(list.size()))]);
  }
  return v;
}

std::vector<NodeId> to_node_map(const Position& pos, std::span<const NodeId> order) {
  check_dims(pos.hosts.size(), order.size());
  std::vector<NodeId> map(order.size(), -1);
  for (std::size_t d = 0; d < order.size(); ++d) map[static_cast<std::size_t>(order[d])] = pos.hosts[d];
  return map;
}

std::optional<std::vector<Path>> check_feasible(std::span<const NodeId> node_map,
                                                const VirtualNetwork& vn,
                                                const SubstrateNetwork& sn, int max_hops) {
  PathFinder finder(sn);
  std::vector<double> residual;
  std::vector<double> load(sn.node_count(), 0);
  std::vector<NodeId> touched;
  std::vector<Path> paths;
  const auto order = links_by_demand(vn);
  if (!place_and_route(node_map, vn, sn, max_hops, order, finder, residual, load, touched, paths)) {
    return std::nullopt;
  }
  return paths;
}

Velocity subtract(const Position& a, const Position& b, double fit_a, double fit_b) {
  check_dims(a.hosts.size(), b.hosts.size());
  std::vector<std::uint8_t> conflict(a.hosts.size());
  kernels::active().mismatch(a.hosts, b.hosts, conflict);
  const Position& better = fit_a <= fit_b ? a : b;
  Velocity v;
  v.moves.resize(a.hosts.size(), kKeep);
  for (std::size_t d = 0; d < conflict.size(); ++d) {
    if (conflict[d]) v.moves[d] = better.hosts[d];
  }
  return v;
}

Velocity add(const Velocity& v1, const Velocity& v2, const Velocity& v3, double p1, double p2,
             double p3, Rng& rng) {
  check_dims(v1.moves.size(), v2.moves.size());
  check_dims(v1.moves.size(), v3.moves.size());
  if (p1 < 0 || p2 < 0 || p3 < 0 || std::abs(p1 + p2 + p3 - 1.0) > 1e-9) {
    throw std::invalid_argument("roulette weights must be non-negative and sum to 1");
  }
  Velocity out;
  out.moves.resize(v1.moves.size());
  for (std::size_t d = 0; d < out.moves.size(); ++d) {
    const double r = rng.uniform();
    out.moves[d] = r < p1 ? v1.moves[d] : r < p1 + p2 ? v2.moves[d] : v3.moves[d];
  }
  return out;
}

Velocity add(const Velocity& v1, const Velocity& v2, const Velocity& v3, double p1, double p2,
             double p3, std::uint64_t seed) {
  Rng rng(seed);
  return add(v1, v2, v3, p1, p2, p3, rng);
}

Position multiply(const Position& pos, const Velocity& vel, const CandidateLists& cands, Rng& rng) {
  check_dims(pos.hosts.size(), vel.moves.size());
  check_dims(pos.hosts.size(), cands.dims());
  Position out = pos;
  for (std::size_t d = 0; d < pos.hosts.size(); ++d) {
    const NodeId m = vel.moves[d];
    if (m == kKeep) continue;
    if (m != pos.hosts[d]) {
      out.hosts[d] = m;
      continue;
    }
    const auto& list = cands.lists[d];
    if (list.empty()) throw NoCandidateError(d);
    out.hosts[d] = list[static_cast<std::size_t>(rng.below(list.size()))];
  }
  return out;
}

Position multiply(const Position& pos, const Velocity& vel, const CandidateLists& cands,
                  std::uint64_t seed) {
  Rng rng(seed);
  return multiply(pos, vel, cands, rng);
}

void SwarmParams::validate() const {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (stall_iterations < 1) throw std::invalid_argument("stall_iterations must be >= 1");
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be >= 0");
  if (max_hops < 1) throw std::invalid_argument("max_hops must be >= 1");
  if (backtrack_factor < 0) throw std::invalid_argument("backtrack_factor must be >= 0");
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::no_candidate: return "no_candidate";
    case RejectReason::infeasible: return "infeasible";
  }
  return "unknown";
}

FitnessEvaluator::FitnessEvaluator(const Vnr& vnr, const SubstrateNetwork& sn, double alpha,
                                   int max_hops)
    : vnr_(&vnr),
      sn_(&sn),
      alpha_(alpha),
      max_hops_(max_hops),
      total_cpu_(vnr.graph.total_cpu()),
      link_order_(links_by_demand(vnr.graph)),
      finder_(sn),
      load_(sn.node_count(), 0) {}

std::optional<Embedding> FitnessEvaluator::evaluate(std::span<const NodeId> node_map) {
  Embedding e;
  if (!place_and_route(node_map, vnr_->graph, *sn_, max_hops_, link_order_, finder_, residual_, load_,
                       touched_, e.link_map)) {
    return std::nullopt;
  }
  std::sort(touched_.begin(), touched_.end());
  double watts = 0;
  for (NodeId s : touched_) {
    const SubstrateNode& host = sn_->node(s);
    watts += load_[static_cast<std::size_t>(s)] / host.cpu_capacity * host.power_dynamic_range();
    if (!host.powered_on) watts += host.power_baseline;
  }
  double link_term = 0;
  for (std::size_t l = 0; l < e.link_map.size(); ++l) {
    link_term += vnr_->graph.links()[l].bw_demand * static_cast<double>(e.link_map[l].size());
  }
  e.node_map.assign(node_map.begin(), node_map.end());
  e.energy = watts * vnr_->lifetime;
  e.cost = (total_cpu_ + link_term) * vnr_->lifetime;
  e.fitness = vne::fitness(e.energy, e.cost, alpha_);
  return e;
}

namespace {

struct Particle {
  Position x;
  Velocity v;
  double fit = kInf;
  Position best;
  double best_fit = kInf;
  int backtracks = 0;
  Rng rng;
};

Position fresh_position(const CandidateLists& cands, const VirtualNetwork& vn,
                        const SubstrateNetwork& sn, Rng& rng, InitSampling sampling) {
  try {
    return init_position(cands, vn, sn, rng, sampling);
  } catch (const NoCandidateError&) {
    // The decrement rule ran dry; fall back to independent draws, which the
    // feasibility check will reject or accept on its own.
    return Position{random_velocity(cands, rng).moves};
  }
}

}  // namespace

EmbedOutcome embed_eapso(const Vnr& vnr, const SubstrateNetwork& sn, const SwarmParams& params,
                         std::uint64_t seed) {
  params.validate();
  validate_vnr(vnr);
  const VirtualNetwork& vn = vnr.graph;
  EmbedOutcome out;

  const auto order = virtual_bfs_order(vn);
  const CandidateLists cands = build_candidate_lists(vn, order, sn);
  if (cands.any_empty()) {
    out.reason = RejectReason::no_candidate;
    return out;
  }

  FitnessEvaluator evaluator(vnr, sn, params.alpha, params.max_hops);
  const int budget = params.backtrack_factor * static_cast<int>(vn.node_count());

  std::optional<Embedding> best_embedding;
  Position gbest;
  double gbest_fit = kInf;

  const auto score = [&](Particle& p) {
    const auto map = to_node_map(p.x, order);
    auto e = evaluator.evaluate(map);
    p.fit = e ? e->fitness : kInf;
    if (p.fit < p.best_fit) {
      p.best = p.x;
      p.best_fit = p.fit;
    }
    if (p.best_fit < gbest_fit) {
      gbest = p.best;
      gbest_fit = p.best_fit;
      best_embedding = std::move(e);
    }
  };

  std::vector<Particle> swarm;
  swarm.reserve(static_cast<std::size_t>(params.population));
  for (int i = 0; i < params.population; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Particle p{fresh_position(cands, vn, sn, rng, params.init), {}, kInf, {}, kInf, 0, rng};
    p.v = random_velocity(cands, p.rng);
    swarm.push_back(std::move(p));
  }
  for (Particle& p : swarm) score(p);
  out.best_history.push_back(gbest_fit);

  Rng weights_rng(derive_seed(seed, 0xfeedULL << 32));
  int stall = 0;
  for (int it = 0; it < params.max_iterations && stall < params.stall_iterations; ++it) {
    double u1 = weights_rng.uniform();
    double u2 = weights_rng.uniform();
    if (u1 > u2) std::swap(u1, u2);
    const double p1 = u1;
    const double p2 = u2 - u1;
    const double p3 = 1.0 - u2;

    const double before = gbest_fit;
    for (Particle& p : swarm) {
      const bool feasible = p.fit < kInf;
      if (!feasible && p.backtracks < budget) {
        p.x = fresh_position(cands, vn, sn, p.rng, params.init);
        p.v = random_velocity(cands, p.rng);
        ++p.backtracks;
        ++out.backtracks;
      } else {
        const Velocity keep{std::vector<NodeId>(cands.dims(), kKeep)};
        const Velocity toward_own = p.best_fit < kInf ? subtract(p.best, p.x, p.best_fit, p.fit) : keep;
        const Velocity toward_swarm = gbest_fit < kInf ? subtract(gbest, p.x, gbest_fit, p.fit) : keep;
        p.v = add(p.v, toward_own, toward_swarm, p1, p2, p3, p.rng);
        p.x = multiply(p.x, p.v, cands, p.rng);
      }
      score(p);
    }
    out.best_history.push_back(gbest_fit);
    stall = gbest_fit < before ? 0 : stall + 1;
  }

  if (!best_embedding) {
    out.reason = RejectReason::infeasible;
    return out;
  }
  out.embedding = std::move(best_embedding);
  return out;
}

}  // namespace vne
