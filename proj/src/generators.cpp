#include "vne/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vne/rng.hpp"

namespace vne {

namespace {

struct Candidate {
  NodeId a;
  NodeId b;
  double prob;
  double key;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t count_components(std::size_t n, const std::vector<Candidate>& edges,
                             const std::vector<char>& chosen, std::size_t skip = SIZE_MAX) {
  UnionFind uf(n);
  std::size_t comps = n;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (chosen[i] && i != skip && uf.unite(static_cast<std::size_t>(edges[i].a),
                                           static_cast<std::size_t>(edges[i].b))) {
      --comps;
    }
  }
  return comps;
}

}  // namespace

SubstrateNetwork generate_waxman_substrate(int n_nodes, int n_links, double bw_low, double bw_high,
                                           std::span<const ServerProfile> server_profiles,
                                           std::uint64_t seed, const WaxmanShape& shape) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  const long long max_links = static_cast<long long>(n_nodes) * (n_nodes - 1) / 2;
  if (n_links < n_nodes - 1 || n_links > max_links) {
    throw std::invalid_argument("n_links must lie in [n_nodes-1, n_nodes(n_nodes-1)/2], got " +
                                std::to_string(n_links));
  }
  if (!(bw_low < bw_high) || bw_low < 0) throw std::invalid_argument("need 0 <= bw_low < bw_high");
  if (server_profiles.empty()) throw std::invalid_argument("at least one server profile required");

  Rng rng(seed);
  SubstrateNetwork net;
  for (int i = 0; i < n_nodes; ++i) {
    const auto p = static_cast<std::size_t>(rng.below(server_profiles.size()));
    SubstrateNode node;
    node.cpu_capacity = server_profiles[p].cpu_capacity;
    node.power_baseline = server_profiles[p].power_baseline;
    node.power_full = server_profiles[p].power_full;
    node.profile = static_cast<int>(p);
    node.x = rng.uniform(0, shape.plane);
    node.y = rng.uniform(0, shape.plane);
    net.add_node(node);
  }

  const double diag = shape.plane * std::sqrt(2.0);
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(max_links));
  for (NodeId a = 0; a < n_nodes; ++a) {
    for (NodeId b = a + 1; b < n_nodes; ++b) {
      const SubstrateNode& na = net.node(a);
      const SubstrateNode& nb = net.node(b);
      const double d = std::hypot(na.x - nb.x, na.y - nb.y);
      const double prob = shape.alpha * std::exp(-d / (shape.beta * diag));
      // Weighted sampling without replacement: take the largest log(u)/p.
      const double u = 1.0 - rng.uniform();
      cands.push_back({a, b, prob, std::log(u) / prob});
    }
  }
  std::vector<std::size_t> by_key(cands.size());
  std::iota(by_key.begin(), by_key.end(), 0);
  std::stable_sort(by_key.begin(), by_key.end(),
                   [&](std::size_t l, std::size_t r) { return cands[l].key > cands[r].key; });
  std::vector<char> chosen(cands.size(), 0);
  for (int i = 0; i < n_links; ++i) chosen[by_key[static_cast<std::size_t>(i)]] = 1;

  const auto n = static_cast<std::size_t>(n_nodes);
  std::size_t comps = count_components(n, cands, chosen);
  while (comps > 1) {
    UnionFind uf(n);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (chosen[i]) uf.unite(static_cast<std::size_t>(cands[i].a), static_cast<std::size_t>(cands[i].b));
    }
    std::size_t bridge = SIZE_MAX;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (chosen[i] || uf.find(static_cast<std::size_t>(cands[i].a)) ==
                           uf.find(static_cast<std::size_t>(cands[i].b))) {
        continue;
      }
      if (bridge == SIZE_MAX || cands[i].prob > cands[bridge].prob) bridge = i;
    }
    // A forest with more than one component and at least n-1 edges has a
    // cycle, so some chosen edge is removable without splitting anything.
    std::vector<std::size_t> removable;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (chosen[i]) removable.push_back(i);
    }
    std::stable_sort(removable.begin(), removable.end(),
                     [&](std::size_t l, std::size_t r) { return cands[l].prob < cands[r].prob; });
    std::size_t drop = SIZE_MAX;
    for (std::size_t i : removable) {
      if (count_components(n, cands, chosen, i) == comps) {
        drop = i;
        break;
      }
    }
    if (bridge == SIZE_MAX || drop == SIZE_MAX) throw std::logic_error("connectivity repair failed");
    chosen[drop] = 0;
    chosen[bridge] = 1;
    comps = count_components(n, cands, chosen);
  }

  for (std::size_t i : by_key) {
    if (!chosen[i]) continue;
    net.add_link(cands[i].a, cands[i].b, rng.uniform(bw_low, bw_high));
  }
  return net;
}

VirtualNetwork generate_waxman_virtual(int n_nodes, double connectivity,
                                       std::span<const double> cpu_choices, double bw_low,
                                       double bw_high, std::uint64_t seed, double plane) {
  if (n_nodes < 2) throw std::invalid_argument("virtual network needs >= 2 nodes");
  if (!(connectivity > 0 && connectivity <= 1)) throw std::invalid_argument("connectivity must be in (0, 1]");
  if (cpu_choices.empty()) throw std::invalid_argument("cpu_choices must be nonempty");
  if (!(bw_low > 0 && bw_low <= bw_high)) throw std::invalid_argument("need 0 < bw_low <= bw_high");

  Rng rng(seed);
  VirtualNetwork vn;
  for (int i = 0; i < n_nodes; ++i) {
    const double cpu = cpu_choices[static_cast<std::size_t>(rng.below(cpu_choices.size()))];
    const double x = rng.uniform(0, plane);
    const double y = rng.uniform(0, plane);
    vn.add_node(cpu, x, y);
  }

  // Uniform labelled spanning tree from a random Pruefer sequence.
  const auto n = static_cast<std::size_t>(n_nodes);
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (n == 2) {
    edges.emplace_back(0, 1);
  } else {
    std::vector<NodeId> code(n - 2);
    for (NodeId& c : code) c = static_cast<NodeId>(rng.below(n));
    std::vector<int> degree(n, 1);
    for (NodeId c : code) ++degree[static_cast<std::size_t>(c)];
    for (NodeId c : code) {
      NodeId leaf = 0;
      while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
      edges.emplace_back(std::min(leaf, c), std::max(leaf, c));
      --degree[static_cast<std::size_t>(leaf)];
      --degree[static_cast<std::size_t>(c)];
    }
    NodeId u = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) {
        if (u < 0) {
          u = static_cast<NodeId>(i);
        } else {
          edges.emplace_back(u, static_cast<NodeId>(i));
          break;
        }
      }
    }
  }
  std::vector<char> in_tree(n * n, 0);
  for (auto [a, b] : edges) in_tree[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = 1;

  const double pairs = static_cast<double>(n * (n - 1) / 2);
  const double tree = static_cast<double>(n - 1);
  const double extra_prob =
      pairs > tree ? std::clamp((connectivity * pairs - tree) / (pairs - tree), 0.0, 1.0) : 0.0;
  for (NodeId a = 0; a < n_nodes; ++a) {
    for (NodeId b = a + 1; b < n_nodes; ++b) {
      const bool tree_edge = in_tree[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)];
      const double draw = rng.uniform();
      if (tree_edge || draw < extra_prob) edges.emplace_back(a, b);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [a, b] : edges) vn.add_link(a, b, rng.uniform(bw_low, bw_high));
  return vn;
}

std::vector<Vnr> generate_workload(const WorkloadParams& p, std::uint64_t seed) {
  if (p.n_requests < 1) throw std::invalid_argument("n_requests must be >= 1");
  if (!(p.arrival_rate > 0)) throw std::invalid_argument("arrival_rate must be > 0");
  if (!(p.lifetime_low > 0 && p.lifetime_low <= p.lifetime_high)) {
    throw std::invalid_argument("need 0 < lifetime_low <= lifetime_high");
  }
  if (p.vn_size_low < 2 || p.vn_size_low > p.vn_size_high) {
    throw std::invalid_argument("need 2 <= vn_size_low <= vn_size_high");
  }

  Rng rng(seed);
  const double mean_gap = 100.0 / p.arrival_rate;
  std::vector<Vnr> out;
  out.reserve(static_cast<std::size_t>(p.n_requests));
  double t = 0;
  for (int i = 0; i < p.n_requests; ++i) {
    t += rng.exponential(mean_gap);
    Vnr v;
    v.id = i;
    v.arrival_time = t;
    v.lifetime = rng.uniform(p.lifetime_low, p.lifetime_high);
    const auto size = static_cast<int>(rng.between(p.vn_size_low, p.vn_size_high));
    v.graph = generate_waxman_virtual(size, p.vn.connectivity, p.vn.cpu_choices, p.vn.bw_low,
                                      p.vn.bw_high, derive_seed(seed, static_cast<std::uint64_t>(i)));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vne
