#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vne/generators.hpp"
#include "vne/greedy.hpp"
#include "vne/paths.hpp"
#include "vne/pso.hpp"

using namespace vne;
using vne::testing::make_substrate;
using vne::testing::make_virtual;
using vne::testing::make_vnr;

namespace {

bool contains(const std::vector<NodeId>& list, NodeId n) {
  return std::find(list.begin(), list.end(), n) != list.end();
}

// A 5-node ring with one chord and mixed capacities.
SubstrateNetwork small_substrate() {
  return make_substrate({100, 300, 200, 400, 150},
                        {{0, 1, 50}, {1, 2, 50}, {2, 3, 50}, {3, 4, 50}, {0, 4, 50}, {1, 3, 50}});
}

}  // namespace

TEST_CASE("virtual BFS order") {
  SUBCASE("path with a heavy middle node") {
    const VirtualNetwork vn = make_virtual({4, 7, 4}, {{0, 1, 1}, {1, 2, 1}});
    CHECK(virtual_bfs_order(vn) == std::vector<NodeId>{1, 0, 2});
  }
  SUBCASE("star centre first, then leaves by resource") {
    const VirtualNetwork vn = make_virtual({50, 5, 20, 10}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    CHECK(virtual_bfs_order(vn) == std::vector<NodeId>{0, 2, 3, 1});
  }
  SUBCASE("permutation on random graphs") {
    const std::vector<double> cpu{2500, 2000, 1000, 500};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const VirtualNetwork vn = generate_waxman_virtual(2 + static_cast<int>(seed % 15), 0.4, cpu, 1, 50, seed);
      auto order = virtual_bfs_order(vn);
      std::sort(order.begin(), order.end());
      std::vector<NodeId> ids(vn.node_count());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
      CHECK(order == ids);
    }
  }
  SUBCASE("disconnected input") {
    CHECK_THROWS_AS(virtual_bfs_order(make_virtual({1, 1}, {})), std::invalid_argument);
  }
}

TEST_CASE("candidate lists") {
  SUBCASE("CPU filter") {
    const SubstrateNetwork sn = make_substrate({150, 80, 200}, {{0, 1, 100}, {1, 2, 100}});
    const VirtualNetwork vn = make_virtual({100, 1}, {{0, 1, 1}});
    const auto order = virtual_bfs_order(vn);
    const CandidateLists c = build_candidate_lists(vn, order, sn);
    REQUIRE(order[0] == 0);
    std::vector<NodeId> sorted = c.lists[0];
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<NodeId>{0, 2});
    const auto sorder = substrate_bfs_order(sn);
    std::vector<NodeId> expected;
    for (NodeId s : sorder) {
      if (s != 1) expected.push_back(s);
    }
    CHECK(c.lists[0] == expected);
  }
  SUBCASE("bandwidth screen on a star") {
    const SubstrateNetwork sn = make_substrate({1000, 1000, 1000, 1000}, {{0, 1, 30}, {0, 2, 30}, {0, 3, 30}});
    const VirtualNetwork vn = make_virtual({10, 10}, {{0, 1, 50}});
    const auto order = virtual_bfs_order(vn);
    const CandidateLists c = build_candidate_lists(vn, order, sn);
    CHECK(c.lists[0] == std::vector<NodeId>{0});
    CHECK(c.lists[1] == std::vector<NodeId>{0});
  }
  SUBCASE("every entry passes both tests") {
    const auto profiles = default_server_profiles();
    SubstrateNetwork sn = generate_waxman_substrate(30, 80, 50, 150, profiles, 4);
    for (NodeId s = 0; s < 30; s += 3) sn.reserve_cpu(s, sn.node(s).cpu_capacity - 600);
    const std::vector<double> cpu{2500, 2000, 1000, 500};
    const VirtualNetwork vn = generate_waxman_virtual(8, 0.6, cpu, 1, 50, 4);
    const auto order = virtual_bfs_order(vn);
    const CandidateLists c = build_candidate_lists(vn, order, sn);
    for (std::size_t d = 0; d < c.dims(); ++d) {
      const NodeId v = order[d];
      for (NodeId s : c.lists[d]) {
        CHECK(sn.node(s).cpu_available >= vn.node(v).cpu_demand);
        double incident = 0;
        for (const auto& l : sn.links()) {
          if (l.a == s || l.b == s) incident += l.bw_available;
        }
        CHECK(incident >= vn.incident_bw_demand(v));
      }
    }
  }
}

TEST_CASE("initial positions") {
  const SubstrateNetwork sn = small_substrate();
  SUBCASE("singleton lists force the position") {
    CandidateLists c;
    c.order = {0, 1};
    c.lists = {{3}, {1}};
    const VirtualNetwork vn = make_virtual({10, 10}, {{0, 1, 1}});
    CHECK(init_position(c, vn, sn, 5).hosts == std::vector<NodeId>{3, 1});
  }
  SUBCASE("shared single candidate with room for one") {
    CandidateLists c;
    c.order = {0, 1};
    c.lists = {{0}, {0}};
    const VirtualNetwork vn = make_virtual({60, 60}, {{0, 1, 1}});
    CHECK_THROWS_AS(init_position(c, vn, sn, 5), NoCandidateError);
  }
  SUBCASE("deterministic and inside the lists") {
    const VirtualNetwork vn = make_virtual({90, 90, 90}, {{0, 1, 5}, {1, 2, 5}, {0, 2, 5}});
    const auto order = virtual_bfs_order(vn);
    const CandidateLists c = build_candidate_lists(vn, order, sn);
    for (InitSampling mode : {InitSampling::resource_weighted, InitSampling::uniform}) {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Position p = init_position(c, vn, sn, seed, mode);
        CHECK(p == init_position(c, vn, sn, seed, mode));
        std::map<NodeId, double> load;
        for (std::size_t d = 0; d < c.dims(); ++d) {
          CHECK(contains(c.lists[d], p.hosts[d]));
          load[p.hosts[d]] += 90;
        }
        for (const auto& [s, l] : load) CHECK(l <= sn.node(s).cpu_available);
      }
    }
  }
}

TEST_CASE("feasibility check") {
  SUBCASE("co-located endpoints need no bandwidth") {
    const SubstrateNetwork sn = make_substrate({100, 100}, {{0, 1, 1}});
    const VirtualNetwork vn = make_virtual({10, 10}, {{0, 1, 500}});
    const std::vector<NodeId> map{1, 1};
    const auto paths = check_feasible(map, vn, sn, 2);
    REQUIRE(paths.has_value());
    CHECK((*paths)[0].empty());
  }
  SUBCASE("bottleneck below the demand") {
    const SubstrateNetwork sn = make_substrate({100, 100, 100}, {{0, 1, 50}, {0, 2, 50}, {2, 1, 50}});
    const VirtualNetwork vn = make_virtual({10, 10}, {{0, 1, 60}});
    const std::vector<NodeId> map{0, 1};
    CHECK_FALSE(check_feasible(map, vn, sn, 2).has_value());
  }
  SUBCASE("cumulative reservations on a shared link") {
    const SubstrateNetwork sn = make_substrate({100, 100}, {{0, 1, 100}});
    const VirtualNetwork one = make_virtual({10, 10}, {{0, 1, 60}});
    const std::vector<NodeId> one_map{0, 1};
    CHECK(check_feasible(one_map, one, sn, 2).has_value());
    const VirtualNetwork vn = make_virtual({10, 10, 10}, {{0, 1, 60}, {2, 1, 60}});
    const std::vector<NodeId> map{0, 1, 0};
    CHECK_FALSE(check_feasible(map, vn, sn, 2).has_value());
  }
  SUBCASE("CPU oversubscription") {
    const SubstrateNetwork sn = make_substrate({100, 100}, {{0, 1, 100}});
    const VirtualNetwork vn = make_virtual({60, 60}, {{0, 1, 1}});
    const std::vector<NodeId> map{0, 0};
    CHECK_FALSE(check_feasible(map, vn, sn, 2).has_value());
  }
  SUBCASE("hop limit") {
    const SubstrateNetwork sn = make_substrate({100, 100, 100, 100}, {{0, 1, 100}, {1, 2, 100}, {2, 3, 100}});
    const VirtualNetwork vn = make_virtual({10, 10}, {{0, 1, 5}});
    const std::vector<NodeId> map{0, 3};
    CHECK_FALSE(check_feasible(map, vn, sn, 2).has_value());
    CHECK(check_feasible(map, vn, sn, 3).has_value());
  }
}

TEST_CASE("path finder prefers fewer hops, then wider bottleneck") {
  const SubstrateNetwork sn =
      make_substrate({1, 1, 1, 1}, {{0, 1, 10}, {1, 3, 10}, {0, 2, 40}, {2, 3, 40}, {0, 3, 5}});
  std::vector<double> residual;
  for (const auto& l : sn.links()) residual.push_back(l.bw_available);
  PathFinder pf(sn);
  const auto direct = pf.find(0, 3, 5, residual, 2);
  REQUIRE(direct.has_value());
  CHECK(*direct == Path{4});
  const auto wide = pf.find(0, 3, 6, residual, 2);
  REQUIRE(wide.has_value());
  CHECK(*wide == Path{2, 3});
  CHECK_FALSE(pf.find(0, 3, 41, residual, 2).has_value());
}

TEST_CASE("subtraction") {
  const Position a{{0, 1}};
  const Position b{{0, 2}};
  CHECK(subtract(a, a, 5, 5) == Velocity{{kKeep, kKeep}});
  CHECK(subtract(a, b, 10, 20) == Velocity{{kKeep, 1}});
  CHECK(subtract(a, b, 20, 10) == Velocity{{kKeep, 2}});
  CHECK(subtract(a, b, 10, 10) == Velocity{{kKeep, 1}});
  CHECK_THROWS_AS(subtract(a, Position{{0}}, 1, 1), std::invalid_argument);
}

TEST_CASE("roulette addition") {
  const Velocity v1{{1, kKeep, 7}};
  const Velocity v2{{2, 4, kKeep}};
  const Velocity v3{{3, 5, 9}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(add(v1, v2, v3, 1, 0, 0, seed) == v1);
    CHECK(add(v1, v2, v3, 0, 1, 0, seed) == v2);
    CHECK(add(v1, v2, v3, 0, 0, 1, seed) == v3);
  }
  CHECK_THROWS_AS(add(v1, v2, v3, 0.5, 0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(add(v1, v2, v3, 1.5, -0.5, 0, 1), std::invalid_argument);

  Rng rng(2024);
  std::array<int, 3> counts{};
  const Velocity a{{1}}, b{{2}}, c{{3}};
  for (int i = 0; i < 10000; ++i) {
    const Velocity out = add(a, b, c, 1.0 / 3, 1.0 / 3, 1.0 / 3, rng);
    ++counts[static_cast<std::size_t>(out.moves[0] - 1)];
  }
  for (int n : counts) CHECK(std::abs(n - 3333) <= 150);
}

TEST_CASE("multiplication") {
  constexpr NodeId A = 0, B = 1, C = 2, D = 3;
  CandidateLists cands;
  cands.order = {0, 1, 2};
  cands.lists = {{A, B, C, D}, {B, D}, {A, C}};
  SUBCASE("worked example shape") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Position out = multiply(Position{{A, B, A}}, Velocity{{A, D, C}}, cands, seed);
      CHECK(contains(cands.lists[0], out.hosts[0]));
      CHECK(out.hosts[1] == D);
      CHECK(out.hosts[2] == C);
    }
  }
  SUBCASE("KEEP is identity") {
    const Position pos{{C, B, A}};
    CHECK(multiply(pos, Velocity{{kKeep, kKeep, kKeep}}, cands, 3) == pos);
  }
  SUBCASE("singleton reselection") {
    CandidateLists one;
    one.order = {0};
    one.lists = {{B}};
    CHECK(multiply(Position{{B}}, Velocity{{B}}, one, 1) == Position{{B}});
  }
  SUBCASE("empty list") {
    CandidateLists none;
    none.order = {0};
    none.lists = {{}};
    CHECK_THROWS_AS(multiply(Position{{B}}, Velocity{{B}}, none, 1), NoCandidateError);
  }
}

TEST_CASE("swarm embedder: forced single node") {
  const SubstrateNetwork sn = make_substrate({100}, {});
  const Vnr vnr = make_vnr(make_virtual({10}, {}), 100);
  const EmbedOutcome out = embed_eapso(vnr, sn, SwarmParams{}, 1);
  REQUIRE(out.accepted());
  CHECK(out.embedding->node_map == std::vector<NodeId>{0});
  const double expected = (86 + 10.0 / 100 * 31) * 100 + 10 * 100;
  CHECK(out.embedding->fitness == doctest::Approx(expected));
  CHECK(out.embedding->fitness == out.best_history.back());
}

TEST_CASE("swarm embedder: no CPU left") {
  SubstrateNetwork sn = make_substrate({100, 100}, {{0, 1, 50}});
  sn.reserve_cpu(0, 100);
  sn.reserve_cpu(1, 100);
  const auto before = sn.snapshot();
  const EmbedOutcome out = embed_eapso(make_vnr(make_virtual({10, 10}, {{0, 1, 1}})), sn, SwarmParams{}, 1);
  CHECK_FALSE(out.accepted());
  CHECK(out.reason == RejectReason::no_candidate);
  CHECK(sn.snapshot() == before);
}

TEST_CASE("swarm embedder: sound, monotone, deterministic") {
  const auto profiles = default_server_profiles();
  SubstrateNetwork sn = generate_waxman_substrate(20, 50, 50, 150, profiles, 8);
  const std::vector<double> cpu{2500, 2000, 1000, 500};
  SwarmParams params;
  params.population = 10;
  params.max_iterations = 15;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vnr vnr = make_vnr(generate_waxman_virtual(2 + static_cast<int>(seed % 6), 0.5, cpu, 1, 50, seed), 400);
    const EmbedOutcome a = embed_eapso(vnr, sn, params, seed);
    const EmbedOutcome b = embed_eapso(vnr, sn, params, seed);
    CHECK(a.embedding == b.embedding);
    CHECK(a.best_history == b.best_history);
    for (std::size_t i = 1; i < a.best_history.size(); ++i) CHECK(a.best_history[i] <= a.best_history[i - 1]);
    if (!a.accepted()) continue;
    CHECK(vne::testing::validate_embedding(vnr.graph, sn, *a.embedding, params.max_hops).empty());
    CHECK(a.embedding->fitness == a.best_history.back());
    const double e = vne::testing::reference_energy(vnr.graph, a.embedding->node_map, sn, vnr.lifetime);
    CHECK(a.embedding->energy == doctest::Approx(e));
  }
}

TEST_CASE("swarm embedder reaches the optimum on a small instance") {
  const SubstrateNetwork sn = small_substrate();
  const Vnr vnr = make_vnr(make_virtual({90, 60, 40}, {{0, 1, 20}, {1, 2, 10}, {0, 2, 15}}), 100);
  const double best = vne::testing::brute_force_optimum(vnr.graph, sn, vnr.lifetime, 1.0, 2);
  const EmbedOutcome out = embed_eapso(vnr, sn, SwarmParams{}, 42);
  REQUIRE(out.accepted());
  CHECK(out.embedding->fitness <= best * 1.05);
  CHECK(out.embedding->fitness >= best - 1e-6);
}

TEST_CASE("swarm parameter validation") {
  SwarmParams p;
  p.population = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SwarmParams{};
  p.max_hops = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("greedy baseline") {
  const SubstrateNetwork sn = small_substrate();
  SUBCASE("forced single node") {
    const SubstrateNetwork one = make_substrate({100}, {});
    const EmbedOutcome out = greedy_embed(make_vnr(make_virtual({10}, {})), one, 2);
    REQUIRE(out.accepted());
    CHECK(out.embedding->node_map == std::vector<NodeId>{0});
  }
  SUBCASE("demand above every node") {
    CHECK_FALSE(greedy_embed(make_vnr(make_virtual({1000, 1}, {{0, 1, 1}})), sn, 2).accepted());
  }
  SUBCASE("hand trace") {
    // Virtual totals: v0 = 60, v1 = 100, v2 = 40, so v1, v0, v2.
    // Substrate by available CPU: s3 (400), s1 (300), s2 (200), s4, s0.
    const Vnr vnr = make_vnr(make_virtual({50, 80, 30}, {{0, 1, 10}, {1, 2, 10}}), 100);
    const EmbedOutcome out = greedy_embed(vnr, sn, 2);
    REQUIRE(out.accepted());
    CHECK(out.embedding->node_map == std::vector<NodeId>{1, 3, 2});
    CHECK(out.embedding->link_map[0] == Path{5});
    CHECK(out.embedding->link_map[1] == Path{2});
    const double energy = vne::testing::reference_energy(vnr.graph, {1, 3, 2}, sn, 100);
    CHECK(out.embedding->fitness == doctest::Approx(energy + (160 + 20) * 100));
  }
}
