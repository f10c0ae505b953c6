#include "vne/greedy.hpp"

#include <algorithm>
#include <numeric>

namespace vne {

EmbedOutcome greedy_embed(const Vnr& vnr, const SubstrateNetwork& sn, int max_hops, double alpha) {
  validate_vnr(vnr);
  const VirtualNetwork& vn = vnr.graph;
  EmbedOutcome out;

  std::vector<NodeId> vorder(vn.node_count());
  std::iota(vorder.begin(), vorder.end(), 0);
  std::stable_sort(vorder.begin(), vorder.end(),
                   [&](NodeId l, NodeId r) { return vn.total_resource(l) > vn.total_resource(r); });

  std::vector<NodeId> sorder(sn.node_count());
  std::iota(sorder.begin(), sorder.end(), 0);
  std::stable_sort(sorder.begin(), sorder.end(), [&](NodeId l, NodeId r) {
    return sn.node(l).cpu_available > sn.node(r).cpu_available;
  });

  std::vector<char> used(sn.node_count(), 0);
  std::vector<NodeId> node_map(vn.node_count(), -1);
  for (NodeId v : vorder) {
    const double cpu = vn.node(v).cpu_demand;
    const double bw = vn.incident_bw_demand(v);
    for (NodeId s : sorder) {
      if (used[static_cast<std::size_t>(s)] || sn.node(s).cpu_available < cpu ||
          sn.incident_bw_available(s) < bw) {
        continue;
      }
      node_map[static_cast<std::size_t>(v)] = s;
      used[static_cast<std::size_t>(s)] = 1;
      break;
    }
    if (node_map[static_cast<std::size_t>(v)] < 0) {
      out.reason = RejectReason::no_candidate;
      return out;
    }
  }

  FitnessEvaluator evaluator(vnr, sn, alpha, max_hops);
  out.embedding = evaluator.evaluate(node_map);
  if (!out.embedding) {
    out.reason = RejectReason::infeasible;
    return out;
  }
  out.best_history.push_back(out.embedding->fitness);
  return out;
}

}  // namespace vne
