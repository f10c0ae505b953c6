#include "vne/paths.hpp"

#include <algorithm>
#include <limits>

namespace vne {

PathFinder::PathFinder(const SubstrateNetwork& sn)
    : sn_(&sn),
      stamp_(sn.node_count(), 0),
      dist_(sn.node_count(), 0),
      bottleneck_(sn.node_count(), 0),
      pred_link_(sn.node_count(), -1),
      rank_(sn.node_count(), 0) {}

std::optional<Path> PathFinder::find(NodeId src, NodeId dst, double demand,
                                     std::span<const double> residual, int max_hops) {
  if (src == dst) return Path{};
  if (max_hops < 1) return std::nullopt;
  ++epoch_;
  const auto seen = [&](NodeId n) { return stamp_[static_cast<std::size_t>(n)] == epoch_; };

  layers_.resize(static_cast<std::size_t>(max_hops) + 1);
  for (auto& l : layers_) l.clear();
  stamp_[static_cast<std::size_t>(src)] = epoch_;
  dist_[static_cast<std::size_t>(src)] = 0;
  bottleneck_[static_cast<std::size_t>(src)] = std::numeric_limits<double>::infinity();
  rank_[static_cast<std::size_t>(src)] = 0;
  layers_[0].push_back(src);

  int found_at = -1;
  for (int k = 1; k <= max_hops && found_at < 0; ++k) {
    auto& prev = layers_[static_cast<std::size_t>(k - 1)];
    auto& cur = layers_[static_cast<std::size_t>(k)];
    for (NodeId u : prev) {
      for (const Adjacent& e : sn_->neighbors(u)) {
        const double res = residual[static_cast<std::size_t>(e.link)];
        if (res < demand) continue;
        const auto v = static_cast<std::size_t>(e.node);
        if (!seen(e.node)) {
          stamp_[v] = epoch_;
          dist_[v] = k;
          bottleneck_[v] = -1;
          cur.push_back(e.node);
        } else if (dist_[v] != k) {
          continue;
        }
        const double b = std::min(bottleneck_[static_cast<std::size_t>(u)], res);
        const bool better =
            b > bottleneck_[v] ||
            (b == bottleneck_[v] && rank_[static_cast<std::size_t>(u)] <
                                        rank_[static_cast<std::size_t>(sn_->link(pred_link_[v]).other(e.node))]);
        if (better) {
          bottleneck_[v] = b;
          pred_link_[v] = e.link;
        }
      }
    }
    if (cur.empty()) break;
    // Rank this layer by (predecessor rank, node id): the lexicographic order
    // of the chosen node sequences.
    std::sort(cur.begin(), cur.end(), [&](NodeId l, NodeId r) {
      const int rl = rank_[static_cast<std::size_t>(sn_->link(pred_link_[static_cast<std::size_t>(l)]).other(l))];
      const int rr = rank_[static_cast<std::size_t>(sn_->link(pred_link_[static_cast<std::size_t>(r)]).other(r))];
      return rl != rr ? rl < rr : l < r;
    });
    for (std::size_t i = 0; i < cur.size(); ++i) rank_[static_cast<std::size_t>(cur[i])] = static_cast<int>(i);
    if (seen(dst)) found_at = k;
  }
  if (found_at < 0) return std::nullopt;

  Path path(static_cast<std::size_t>(found_at));
  NodeId at = dst;
  for (int k = found_at - 1; k >= 0; --k) {
    const LinkId l = pred_link_[static_cast<std::size_t>(at)];
    path[static_cast<std::size_t>(k)] = l;
    at = sn_->link(l).other(at);
  }
  return path;
}

}  // namespace vne
