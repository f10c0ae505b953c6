#pragma once

// Multi-data-center front end: Heavy Clique Matching coarsening of a
// request, projection back to virtual nodes, induced sub-graphs and
// best-fit data-center assignment.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vne/allocation.hpp"
#include "vne/pso.hpp"

namespace vne {

struct CoarseNode {
  int id = 0;
  std::vector<NodeId> members;  // sorted ascending
  double weight = 0;            // summed member CPU demand
};

struct CoarseLink {
  int a = 0;
  int b = 0;
  double bw = 0;  // summed demand of crossing virtual links
};

struct CoarseGraph {
  std::vector<CoarseNode> nodes;
  std::vector<CoarseLink> links;
  std::vector<int> owner;  // virtual node id -> coarse node id
};

class CoarseningError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Repeated matching passes. Each pass visits coarse nodes heaviest first and
/// merges an unmatched node with the unmatched neighbour whose union has the
/// highest internal edge density (ties: larger crossing bandwidth, then lower
/// id), never letting a weight exceed min_resource. Stops when a pass merges
/// nothing. Throws CoarseningError if a single node outweighs min_resource.
CoarseGraph coarsen_hcm(const VirtualNetwork& vn, double min_resource);

std::vector<NodeId> uncoarsen(const CoarseNode& node);

/// Induced sub-graph with ids renumbered 0..k-1 in ascending original order.
struct Subgraph {
  VirtualNetwork graph;
  std::vector<NodeId> original_nodes;
  std::vector<LinkId> original_links;
};

Subgraph construct_subgraph(std::span<const NodeId> members, const VirtualNetwork& vn);

struct DataCenter {
  SubstrateNetwork network;
  NodeId gateway = 0;
};

struct InterDcLink {
  int a = 0;
  int b = 0;
  double bw_capacity = 0;
  double bw_available = 0;
};

struct DataCenterSnapshot {
  std::vector<ResourceSnapshot> centers;
  std::vector<double> inter_available;
  bool operator==(const DataCenterSnapshot&) const = default;
};

class DataCenterSet {
 public:
  int add_center(SubstrateNetwork network, NodeId gateway);
  int add_link(int a, int b, double bw_capacity);

  std::size_t size() const { return centers_.size(); }
  const DataCenter& center(int id) const { return centers_.at(static_cast<std::size_t>(id)); }
  DataCenter& center(int id) { return centers_.at(static_cast<std::size_t>(id)); }
  const std::vector<DataCenter>& centers() const { return centers_; }
  const std::vector<InterDcLink>& links() const { return links_; }
  std::optional<int> find_link(int a, int b) const;

  double available_cpu(int id) const;
  void reserve_inter(int link, double amount);
  void release_inter(int link, double amount);

  DataCenterSnapshot snapshot() const;
  void restore(const DataCenterSnapshot& snap);
  void validate() const;

 private:
  std::vector<DataCenter> centers_;
  std::vector<InterDcLink> links_;
};

/// Best fit: among data centers whose available CPU (less `pending`, the CPU
/// already promised in this round) covers the sub-graph and whose candidate
/// screen gives every node at least one host, the one left with the least
/// CPU. nullopt when none qualifies.
std::optional<int> assign(const VirtualNetwork& sub, const DataCenterSet& dcs,
                          std::span<const double> pending = {});

/// Minimum over data centers of total available CPU.
double min_available_cpu(const DataCenterSet& dcs);

/// Coarse node visit order: BFS from the heaviest node, levels by descending
/// weight; components by descending total weight.
std::vector<int> coarse_bfs_order(const CoarseGraph& cg);

struct DistributedPart {
  int dc = 0;
  Subgraph sub;
  Embedding embedding;  // in sub-graph ids / the data center's substrate ids
  Allocation allocation;
  std::vector<double> best_history;
};

struct InterDcReservation {
  LinkId virtual_link = 0;
  int inter_link = 0;
  double bw = 0;
};

enum class DistributedReject {
  none,
  unsatisfiable,       // a single virtual node outweighs min_resource
  no_datacenter,       // some coarse node fits nowhere
  inter_dc_bandwidth,  // a cut link has no direct inter-DC link with room
  embedding_failed,    // a per-DC swarm search rejected its sub-graph
};
const char* to_string(DistributedReject r);

struct DistributedOutcome {
  DistributedReject reason = DistributedReject::none;
  std::vector<int> coarse_assignment;  // coarse node id -> data center
  std::vector<DistributedPart> parts;
  std::vector<InterDcReservation> inter;
  double energy = 0;
  double cost = 0;
  double fitness = 0;

  bool accepted() const { return reason == DistributedReject::none; }
};

struct DistributedOptions {
  /// Test hook: called before each per-DC search with the part index; a true
  /// return forces that part to fail.
  std::function<bool(std::size_t)> fail_part;
};

/// Coarsen, assign every coarse node, reserve cut links on direct inter-DC
/// links, then run the swarm search per data center. On success the
/// reservations stay applied to dcs; on any failure dcs is restored exactly.
DistributedOutcome embed_distributed(const Vnr& vnr, DataCenterSet& dcs, const SwarmParams& params,
                                     std::uint64_t seed, const DistributedOptions& options = {});

/// Returns everything a successful outcome reserved.
void release_distributed(DataCenterSet& dcs, const DistributedOutcome& outcome);

}  // namespace vne
