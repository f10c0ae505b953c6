#include "vne/topology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vne/kernels.hpp"

namespace vne {

double quantize(double amount) {
  return std::nearbyint(amount / kResourceQuantum) * kResourceQuantum;
}

std::vector<ServerProfile> default_server_profiles() {
  // cores x MHz for capacity.
  return {
      {"HP ProLiant ML110 G4", 2 * 1860.0, 86.0, 117.0},
      {"HP ProLiant ML110 G5", 2 * 2660.0, 93.7, 135.0},
  };
}

namespace detail {

void Adjacency::add_link(NodeId a, NodeId b, LinkId id) {
  const auto n = static_cast<NodeId>(adj_.size());
  if (a < 0 || b < 0 || a >= n || b >= n) {
    throw std::invalid_argument("link endpoint " + std::to_string(a < 0 || a >= n ? a : b) +
                                " is not a node");
  }
  if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
  if (find(a, b)) {
    throw std::invalid_argument("parallel link " + std::to_string(a) + "-" + std::to_string(b));
  }
  adj_[static_cast<std::size_t>(a)].push_back({b, id});
  adj_[static_cast<std::size_t>(b)].push_back({a, id});
}

std::optional<LinkId> Adjacency::find(NodeId a, NodeId b) const {
  if (a < 0 || static_cast<std::size_t>(a) >= adj_.size()) return std::nullopt;
  for (const Adjacent& e : adj_[static_cast<std::size_t>(a)]) {
    if (e.node == b) return e.link;
  }
  return std::nullopt;
}

bool Adjacency::connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(adj_.size(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const Adjacent& e : adj_[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(e.node)]) {
        seen[static_cast<std::size_t>(e.node)] = 1;
        ++reached;
        stack.push_back(e.node);
      }
    }
  }
  return reached == adj_.size();
}

}  // namespace detail

NodeId SubstrateNetwork::add_node(SubstrateNode node) {
  node.id = static_cast<NodeId>(nodes_.size());
  node.cpu_capacity = quantize(node.cpu_capacity);
  node.cpu_available = node.cpu_available > 0 ? quantize(node.cpu_available) : node.cpu_capacity;
  if (node.cpu_capacity < 0 || node.cpu_available > node.cpu_capacity) {
    throw std::invalid_argument("node " + std::to_string(node.id) + ": bad CPU capacity");
  }
  if (!(node.power_full > node.power_baseline && node.power_baseline > 0)) {
    throw std::invalid_argument("node " + std::to_string(node.id) +
                                ": need power_full > power_baseline > 0");
  }
  nodes_.push_back(node);
  adj_.add_node();
  return node.id;
}

LinkId SubstrateNetwork::add_link(NodeId a, NodeId b, double bw_capacity) {
  if (!(bw_capacity >= 0)) throw std::invalid_argument("negative link bandwidth");
  const auto id = static_cast<LinkId>(links_.size());
  adj_.add_link(a, b, id);
  const double bw = quantize(bw_capacity);
  links_.push_back({a, b, bw, bw});
  return id;
}

double SubstrateNetwork::incident_bw_available(NodeId id) const {
  double sum = 0;
  for (const Adjacent& e : neighbors(id)) sum += links_[static_cast<std::size_t>(e.link)].bw_available;
  return sum;
}

double SubstrateNetwork::total_resource(NodeId id) const {
  return node(id).cpu_available + incident_bw_available(id);
}

void SubstrateNetwork::reserve_cpu(NodeId id, double amount) {
  SubstrateNode& n = nodes_.at(static_cast<std::size_t>(id));
  if (amount > n.cpu_available) {
    throw std::logic_error("CPU over-reservation on node " + std::to_string(id));
  }
  n.cpu_available -= amount;
}

void SubstrateNetwork::release_cpu(NodeId id, double amount) {
  SubstrateNode& n = nodes_.at(static_cast<std::size_t>(id));
  if (n.cpu_available + amount > n.cpu_capacity) {
    throw std::logic_error("CPU over-release on node " + std::to_string(id));
  }
  n.cpu_available += amount;
}

void SubstrateNetwork::reserve_bw(LinkId id, double amount) {
  SubstrateLink& l = links_.at(static_cast<std::size_t>(id));
  if (amount > l.bw_available) {
    throw std::logic_error("bandwidth over-reservation on link " + std::to_string(id));
  }
  l.bw_available -= amount;
}

void SubstrateNetwork::release_bw(LinkId id, double amount) {
  SubstrateLink& l = links_.at(static_cast<std::size_t>(id));
  if (l.bw_available + amount > l.bw_capacity) {
    throw std::logic_error("bandwidth over-release on link " + std::to_string(id));
  }
  l.bw_available += amount;
}

void SubstrateNetwork::set_dc(int dc_id) {
  for (SubstrateNode& n : nodes_) n.dc_id = dc_id;
}

ResourceSnapshot SubstrateNetwork::snapshot() const {
  ResourceSnapshot s;
  s.cpu_available.reserve(nodes_.size());
  s.powered_on.reserve(nodes_.size());
  for (const SubstrateNode& n : nodes_) {
    s.cpu_available.push_back(n.cpu_available);
    s.powered_on.push_back(n.powered_on);
  }
  s.bw_available.reserve(links_.size());
  for (const SubstrateLink& l : links_) s.bw_available.push_back(l.bw_available);
  return s;
}

void SubstrateNetwork::restore(const ResourceSnapshot& s) {
  if (s.cpu_available.size() != nodes_.size() || s.bw_available.size() != links_.size()) {
    throw std::invalid_argument("snapshot does not match network shape");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].cpu_available = s.cpu_available[i];
    nodes_[i].powered_on = s.powered_on[i];
  }
  for (std::size_t i = 0; i < links_.size(); ++i) links_[i].bw_available = s.bw_available[i];
}

void SubstrateNetwork::validate() const {
  for (const SubstrateNode& n : nodes_) {
    const std::string where = "node " + std::to_string(n.id);
    if (n.cpu_available < 0 || n.cpu_available > n.cpu_capacity) {
      throw std::logic_error(where + ": cpu_available outside [0, capacity]");
    }
    if (!(n.power_full > n.power_baseline && n.power_baseline > 0)) {
      throw std::logic_error(where + ": bad power profile");
    }
    if (n.cpu_available < n.cpu_capacity && !n.powered_on) {
      throw std::logic_error(where + ": hosting load while powered off");
    }
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const SubstrateLink& l = links_[i];
    if (l.bw_available < 0 || l.bw_available > l.bw_capacity) {
      throw std::logic_error("link " + std::to_string(i) + ": bw_available outside [0, capacity]");
    }
  }
}

NodeId VirtualNetwork::add_node(double cpu_demand, double x, double y) {
  const auto id = static_cast<NodeId>(nodes_.size());
  const double cpu = quantize(cpu_demand);
  if (!(cpu > 0)) throw std::invalid_argument("virtual node " + std::to_string(id) + ": cpu_demand must be > 0");
  nodes_.push_back({id, cpu, x, y});
  adj_.add_node();
  return id;
}

LinkId VirtualNetwork::add_link(NodeId a, NodeId b, double bw_demand) {
  const double bw = quantize(bw_demand);
  if (!(bw > 0)) throw std::invalid_argument("virtual link bw_demand must be > 0");
  const auto id = static_cast<LinkId>(links_.size());
  adj_.add_link(a, b, id);
  links_.push_back({a, b, bw});
  return id;
}

double VirtualNetwork::incident_bw_demand(NodeId id) const {
  double sum = 0;
  for (const Adjacent& e : neighbors(id)) sum += links_[static_cast<std::size_t>(e.link)].bw_demand;
  return sum;
}

double VirtualNetwork::total_resource(NodeId id) const {
  return node(id).cpu_demand + incident_bw_demand(id);
}

double VirtualNetwork::total_cpu() const {
  std::vector<double> v;
  v.reserve(nodes_.size());
  for (const VirtualNode& n : nodes_) v.push_back(n.cpu_demand);
  return kernels::active().sum(v);
}

double VirtualNetwork::total_bw() const {
  std::vector<double> v;
  v.reserve(links_.size());
  for (const VirtualLink& l : links_) v.push_back(l.bw_demand);
  return kernels::active().sum(v);
}

void validate_vnr(const Vnr& vnr) {
  if (!(vnr.arrival_time >= 0)) throw std::invalid_argument("VNR arrival_time must be >= 0");
  if (!(vnr.lifetime > 0)) throw std::invalid_argument("VNR lifetime must be > 0");
  if (vnr.graph.node_count() == 0) throw std::invalid_argument("VNR has no nodes");
  if (!vnr.graph.connected()) throw std::invalid_argument("VNR graph is disconnected");
}

}  // namespace vne
