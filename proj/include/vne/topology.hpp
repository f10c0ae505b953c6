#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vne {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

/// Resource amounts (CPU, bandwidth) live on a dyadic grid of 2^-16 units.
/// Sums and differences of grid values below 2^36 are exact in double, which
/// keeps reserve/release bookkeeping free of rounding drift.
inline constexpr double kResourceQuantum = 0x1.0p-16;
double quantize(double amount);

struct ServerProfile {
  std::string name;
  double cpu_capacity;    // MIPS
  double power_baseline;  // watts when on and idle
  double power_full;      // watts at full utilization
};

/// HP ProLiant ML110 G4 and G5 figures (SPECpower-style constants).
std::vector<ServerProfile> default_server_profiles();

struct Adjacent {
  NodeId node;
  LinkId link;
};

namespace detail {

/// Undirected adjacency index shared by substrate and virtual graphs.
class Adjacency {
 public:
  void add_node() { adj_.emplace_back(); }
  void add_link(NodeId a, NodeId b, LinkId id);
  std::optional<LinkId> find(NodeId a, NodeId b) const;
  std::span<const Adjacent> neighbors(NodeId n) const { return adj_[static_cast<std::size_t>(n)]; }
  std::size_t size() const { return adj_.size(); }
  bool connected() const;

 private:
  std::vector<std::vector<Adjacent>> adj_;
};

}  // namespace detail

struct SubstrateNode {
  NodeId id = 0;
  double cpu_capacity = 0;
  double cpu_available = 0;
  double power_baseline = 0;
  double power_full = 0;
  bool powered_on = false;
  int dc_id = 0;
  int profile = 0;
  double x = 0;
  double y = 0;

  double power_dynamic_range() const { return power_full - power_baseline; }
  bool operator==(const SubstrateNode&) const = default;
};

struct SubstrateLink {
  NodeId a = 0;
  NodeId b = 0;
  double bw_capacity = 0;
  double bw_available = 0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool operator==(const SubstrateLink&) const = default;
};

/// Available-resource state of a substrate, for exact restore.
struct ResourceSnapshot {
  std::vector<double> cpu_available;
  std::vector<bool> powered_on;
  std::vector<double> bw_available;
  bool operator==(const ResourceSnapshot&) const = default;
};

class SubstrateNetwork {
 public:
  /// Appends a node; its id is its index. Capacity is quantized and the node
  /// starts with cpu_available = cpu_capacity unless a smaller value is given.
  NodeId add_node(SubstrateNode node);
  LinkId add_link(NodeId a, NodeId b, double bw_capacity);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<SubstrateNode>& nodes() const { return nodes_; }
  const std::vector<SubstrateLink>& links() const { return links_; }
  const SubstrateNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const SubstrateLink& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }
  std::span<const Adjacent> neighbors(NodeId id) const { return adj_.neighbors(id); }
  std::optional<LinkId> find_link(NodeId a, NodeId b) const { return adj_.find(a, b); }

  double incident_bw_available(NodeId id) const;
  /// Available CPU plus available bandwidth of incident links.
  double total_resource(NodeId id) const;
  bool connected() const { return adj_.connected(); }

  void reserve_cpu(NodeId id, double amount);
  void release_cpu(NodeId id, double amount);
  void reserve_bw(LinkId id, double amount);
  void release_bw(LinkId id, double amount);
  void set_powered(NodeId id, bool on) { nodes_.at(static_cast<std::size_t>(id)).powered_on = on; }
  void set_dc(int dc_id);

  ResourceSnapshot snapshot() const;
  void restore(const ResourceSnapshot& snap);

  /// Throws std::logic_error if any node or link invariant is broken.
  void validate() const;

  friend bool operator==(const SubstrateNetwork& l, const SubstrateNetwork& r) {
    return l.nodes_ == r.nodes_ && l.links_ == r.links_;
  }

 private:
  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  detail::Adjacency adj_;
};

struct VirtualNode {
  NodeId id = 0;
  double cpu_demand = 0;
  double x = 0;
  double y = 0;
  bool operator==(const VirtualNode&) const = default;
};

struct VirtualLink {
  NodeId a = 0;
  NodeId b = 0;
  double bw_demand = 0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool operator==(const VirtualLink&) const = default;
};

class VirtualNetwork {
 public:
  NodeId add_node(double cpu_demand, double x = 0, double y = 0);
  LinkId add_link(NodeId a, NodeId b, double bw_demand);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<VirtualNode>& nodes() const { return nodes_; }
  const std::vector<VirtualLink>& links() const { return links_; }
  const VirtualNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const VirtualLink& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }
  std::span<const Adjacent> neighbors(NodeId id) const { return adj_.neighbors(id); }
  std::optional<LinkId> find_link(NodeId a, NodeId b) const { return adj_.find(a, b); }
  bool connected() const { return adj_.connected(); }

  double incident_bw_demand(NodeId id) const;
  /// CPU demand plus bandwidth demand of incident links.
  double total_resource(NodeId id) const;
  double total_cpu() const;
  double total_bw() const;

  friend bool operator==(const VirtualNetwork& l, const VirtualNetwork& r) {
    return l.nodes_ == r.nodes_ && l.links_ == r.links_;
  }

 private:
  std::vector<VirtualNode> nodes_;
  std::vector<VirtualLink> links_;
  detail::Adjacency adj_;
};

/// A virtual network request: graph plus arrival time and lifetime.
struct Vnr {
  int id = 0;
  VirtualNetwork graph;
  double arrival_time = 0;
  double lifetime = 1;
};

void validate_vnr(const Vnr& vnr);

}  // namespace vne
