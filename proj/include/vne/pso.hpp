#pragma once

// Discrete particle swarm embedder for a single substrate.
//
// A position assigns one substrate host to every virtual node, indexed by
// the virtual BFS order ("dimension"). A velocity holds, per dimension,
// either kKeep or a substrate host to move to. The update is
//
//   v <- p1 v (+) p2 (pBest (-) x) (+) p3 (gBest (-) x)
//   x <- x (*) v
//
// with (-) keeping the better solution's host at each conflicting dimension,
// (+) a per-dimension roulette over the three velocities, and (*) adopting
// the velocity host or, when it equals the current host, reselecting from
// the candidate list.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/paths.hpp"
#include "vne/rng.hpp"
#include "vne/topology.hpp"

namespace vne {

inline constexpr NodeId kKeep = -1;

struct Position {
  std::vector<NodeId> hosts;
  bool operator==(const Position&) const = default;
};

struct Velocity {
  std::vector<NodeId> moves;  // kKeep or a substrate host
  bool operator==(const Velocity&) const = default;
};

struct CandidateLists {
  std::vector<NodeId> order;               // virtual node at each dimension
  std::vector<std::vector<NodeId>> lists;  // eligible hosts per dimension

  std::size_t dims() const { return order.size(); }
  bool any_empty() const;
};

class NoCandidateError : public std::runtime_error {
 public:
  explicit NoCandidateError(std::size_t dimension);
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_;
};

/// BFS from the node with the largest total resource; each level sorted by
/// descending total resource, ties by lower id. Throws on disconnected input.
std::vector<NodeId> virtual_bfs_order(const VirtualNetwork& vn);

/// Same ordering over available substrate resources. Disconnected substrates
/// are covered component by component.
std::vector<NodeId> substrate_bfs_order(const SubstrateNetwork& sn);

/// Per dimension, the substrate BFS order filtered to hosts with enough
/// available CPU and whose incident available bandwidth covers the virtual
/// node's incident demand.
CandidateLists build_candidate_lists(const VirtualNetwork& vn, std::span<const NodeId> order,
                                     const SubstrateNetwork& sn);

enum class InitSampling { resource_weighted, uniform };

/// Places dimensions in order, decrementing a private view of available CPU
/// so no host is oversubscribed by this position. Throws NoCandidateError
/// when a dimension has no host left.
Position init_position(const CandidateLists& cands, const VirtualNetwork& vn,
                       const SubstrateNetwork& sn, Rng& rng,
                       InitSampling sampling = InitSampling::resource_weighted);
Position init_position(const CandidateLists& cands, const VirtualNetwork& vn,
                       const SubstrateNetwork& sn, std::uint64_t seed,
                       InitSampling sampling = InitSampling::resource_weighted);

/// Uniform draw per dimension from the candidate list.
Velocity random_velocity(const CandidateLists& cands, Rng& rng);

std::vector<NodeId> to_node_map(const Position& pos, std::span<const NodeId> order);

/// Maps every virtual link (largest demand first) on a path of at most
/// max_hops links, reserving bandwidth cumulatively. nullopt when the node
/// map oversubscribes CPU or some link cannot be routed.
std::optional<std::vector<Path>> check_feasible(std::span<const NodeId> node_map,
                                                const VirtualNetwork& vn,
                                                const SubstrateNetwork& sn, int max_hops);

Velocity subtract(const Position& a, const Position& b, double fit_a, double fit_b);
Velocity add(const Velocity& v1, const Velocity& v2, const Velocity& v3, double p1, double p2,
             double p3, Rng& rng);
Velocity add(const Velocity& v1, const Velocity& v2, const Velocity& v3, double p1, double p2,
             double p3, std::uint64_t seed);
Position multiply(const Position& pos, const Velocity& vel, const CandidateLists& cands, Rng& rng);
Position multiply(const Position& pos, const Velocity& vel, const CandidateLists& cands,
                  std::uint64_t seed);

struct SwarmParams {
  int population = 30;
  int max_iterations = 50;
  int stall_iterations = 15;  // stop after this many iterations without gBest improvement
  double alpha = 1.0;         // energy weight in the fitness
  int max_hops = 2;
  int backtrack_factor = 3;   // re-initializations per particle: factor * |virtual nodes|
  InitSampling init = InitSampling::resource_weighted;

  void validate() const;
};

enum class RejectReason { none, no_candidate, infeasible };
const char* to_string(RejectReason r);

struct EmbedOutcome {
  std::optional<Embedding> embedding;
  RejectReason reason = RejectReason::none;
  std::vector<double> best_history;  // gBest fitness after init and after each iteration
  int backtracks = 0;

  bool accepted() const { return embedding.has_value(); }
};

/// Scores node maps for one request on one substrate state.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const Vnr& vnr, const SubstrateNetwork& sn, double alpha, int max_hops);

  /// Fills an Embedding (paths, energy, cost, fitness) or returns nullopt if
  /// the node map is infeasible.
  std::optional<Embedding> evaluate(std::span<const NodeId> node_map);

 private:
  const Vnr* vnr_;
  const SubstrateNetwork* sn_;
  double alpha_;
  int max_hops_;
  double total_cpu_;
  std::vector<LinkId> link_order_;
  PathFinder finder_;
  std::vector<double> residual_;
  std::vector<double> load_;
  std::vector<NodeId> touched_;
};

/// Discrete PSO search. The substrate is read, never modified.
EmbedOutcome embed_eapso(const Vnr& vnr, const SubstrateNetwork& sn, const SwarmParams& params,
                         std::uint64_t seed);

}  // namespace vne
