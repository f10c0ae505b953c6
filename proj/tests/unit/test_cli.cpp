#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "config.hpp"
#include "doctest.h"
#include "io.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"
#include "vne/brite.hpp"

namespace fs = std::filesystem;
using namespace vne;
using namespace vne::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("vne_cli_test_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(VNE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall =
    R"({"substrate":{"nodes":15,"links":35},"workload":{"requests":30,"vn_nodes_high":5},)"
    R"("swarm":{"population":8,"iterations":8},"bucket":250})";

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  write_atomic(p, text);
  return p;
}

std::vector<std::string> column(const std::string& csv, std::size_t index) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t i = 0; i <= index; ++i) std::getline(ls, cell, ',');
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TEST_CASE("config defaults follow the experimental setup") {
  const ExperimentConfig cfg = parse_config("{}");
  CHECK(cfg.substrate.nodes == 100);
  CHECK(cfg.substrate.links == 500);
  CHECK(cfg.substrate.bw_low == 50);
  CHECK(cfg.substrate.bw_high == 150);
  CHECK(cfg.workload.n_requests == 1000);
  CHECK(cfg.workload.arrival_rate == 10);
  CHECK(cfg.workload.lifetime_low == 300);
  CHECK(cfg.workload.lifetime_high == 700);
  CHECK(cfg.workload.vn.connectivity == 0.5);
  CHECK(cfg.swarm.max_hops == 2);
  CHECK(cfg.swarm.backtrack_factor == 3);
  CHECK(cfg.bucket == 1000);
}

TEST_CASE("config round trip and rejection") {
  ExperimentConfig cfg = parse_config(kSmall);
  CHECK(cfg.substrate.nodes == 15);
  const ExperimentConfig again = parse_config(dump_config(cfg));
  CHECK(dump_config(again) == dump_config(cfg));
  CHECK_THROWS_AS(parse_config(R"({"substrat":{}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"swarm":{"max_hops":0}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"workload":{"requests":"many"}})"), InputError);
  CHECK_THROWS_AS(parse_config("{"), InputError);
}

TEST_CASE("log and workload files round trip") {
  VnrLogEntry e;
  e.vnr_id = 4;
  e.arrival = 1.5;
  e.lifetime = 300;
  e.accepted = true;
  e.energy = 10.25;
  e.cost = 77;
  e.revenue = 0.1;
  e.nodes = {{0, 0, 3, 500}};
  e.links = {{-1, 0, {}, 2, 7.5}, {0, 1, {4, 5}, -1, 1}};
  e.best_histories = {{std::numeric_limits<double>::infinity(), 9, 8}};
  const auto back = parse_log_jsonl(log_jsonl({e}));
  REQUIRE(back.size() == 1);
  CHECK(back[0].revenue == 0.1);
  CHECK(back[0].links[1].path == Path{4, 5});
  CHECK(back[0].best_histories == e.best_histories);
  CHECK_THROWS_AS(parse_log_jsonl("{\"vnr_id\": 1}\n"), InputError);

  const std::vector<WorkloadIndexRow> rows{{0, 0.25, 300, "vn/vn_0000.brite"}, {1, 9.75, 512.5, "vn/vn_0001.brite"}};
  const auto parsed = parse_workload_csv(workload_csv(rows));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].arrival == 9.75);
  CHECK(parsed[1].file == "vn/vn_0001.brite");
  CHECK_THROWS_AS(parse_workload_csv("id,when\n"), InputError);
}

TEST_CASE("generate: default config writes the full experiment") {
  TempDir t;
  REQUIRE(run("generate --out " + t.path.string()) == 0);
  const auto index = parse_workload_csv(read_file(t.path / "workload.csv"));
  CHECK(index.size() == 1000);
  std::size_t vn_files = 0;
  for (const auto& entry : fs::directory_iterator(t.path / "vn")) vn_files += entry.is_regular_file();
  CHECK(vn_files == 1000);
  const SubstrateNetwork sn = read_brite_substrate(read_file(t.path / "substrate.brite"));
  CHECK(sn.node_count() == 100);
  CHECK(sn.link_count() == 500);
}

TEST_CASE("generate: deterministic, validated") {
  TempDir t;
  const fs::path cfg = write_config(t.path, kSmall);
  REQUIRE(run("generate --config " + cfg.string() + " --seed 5 --out " + (t.path / "a").string()) == 0);
  REQUIRE(run("generate --config " + cfg.string() + " --seed 5 --out " + (t.path / "b").string()) == 0);
  for (const auto& entry : fs::recursive_directory_iterator(t.path / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), t.path / "a");
    CHECK(read_file(entry.path()) == read_file(t.path / "b" / rel));
  }
  const fs::path zero = t.path / "zero.json";
  write_atomic(zero, R"({"workload":{"requests":0}})");
  CHECK(run("generate --config " + zero.string() + " --out " + (t.path / "c").string()) == 2);
  CHECK(run("generate --bogus") == 2);
}

TEST_CASE("embed: forced instance, rejection and bad input") {
  TempDir t;
  const SubstrateNetwork sn = vne::testing::make_substrate({3720}, {});
  write_atomic(t.path / "sn.brite", write_brite(sn));
  write_atomic(t.path / "vn.brite", write_brite(vne::testing::make_virtual({1000}, {})));
  write_atomic(t.path / "big.brite", write_brite(vne::testing::make_virtual({5000}, {})));
  write_atomic(t.path / "broken.brite", "Topology: ( 1 Nodes, 0 Edges )\n\nNodes: ( 1 )\nzero\n");

  const std::string base = "embed --substrate " + (t.path / "sn.brite").string() + " --vn ";
  REQUIRE(run(base + (t.path / "vn.brite").string() + " --out " + (t.path / "e.json").string()) == 0);
  const auto j = nlohmann::json::parse(read_file(t.path / "e.json"));
  CHECK(j["accepted"] == true);
  CHECK(j["node_map"].size() == 1);
  CHECK(j["node_map"][0] == 0);

  CHECK(run(base + (t.path / "big.brite").string() + " --out " + (t.path / "r.json").string()) == 3);
  const auto r = nlohmann::json::parse(read_file(t.path / "r.json"));
  CHECK(r["accepted"] == false);
  CHECK(r["reason"] == "no_candidate");

  CHECK(run(base + (t.path / "broken.brite").string()) == 2);
  CHECK(run(base + (t.path / "vn.brite").string() + " --embedder greedy") == 0);
}

TEST_CASE("simulate and report agree") {
  TempDir t;
  const fs::path cfg = write_config(t.path, kSmall);
  const std::string gen = (t.path / "gen").string();
  REQUIRE(run("generate --config " + cfg.string() + " --out " + gen) == 0);
  const std::string sim_a = (t.path / "eapso").string();
  const std::string sim_b = (t.path / "greedy").string();
  REQUIRE(run("simulate --config " + cfg.string() + " --input " + gen + " --out " + sim_a) == 0);
  REQUIRE(run("simulate --config " + cfg.string() + " --embedder greedy --input " + gen + " --out " + sim_b) == 0);

  const std::string ma = read_file(fs::path(sim_a) / "metrics.csv");
  const std::string mb = read_file(fs::path(sim_b) / "metrics.csv");
  CHECK(ma.rfind(std::string(kMetricsHeader) + "\n", 0) == 0);
  CHECK(column(ma, 2) == column(mb, 2));
  CHECK(column(ma, 0) == column(mb, 0));

  const std::string log_path = (fs::path(sim_a) / "log.jsonl").string();
  const std::string rep = (t.path / "rep").string();
  REQUIRE(run("report --config " + cfg.string() + " --log " + log_path + " --substrate " + gen +
              "/substrate.brite --out " + rep) == 0);
  const auto log = parse_log_jsonl(read_file(log_path));
  CHECK(log.size() == 30);
  const std::string report_csv = read_file(fs::path(rep) / "report.csv");
  const auto ratio_col = column(report_csv, 5);
  const double last_ratio = std::stod(ratio_col.back());
  CHECK(last_ratio == doctest::Approx(acceptance_ratio(log, 1e18)));
  const std::string summary = read_file(fs::path(rep) / "report.txt");
  CHECK(summary.find("acceptance_ratio    " + format_double(acceptance_ratio(log, 1e18))) != std::string::npos);

  // The rebuilt series matches the one written by simulate, timing aside.
  for (std::size_t c : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 11u, 12u, 13u}) {
    CAPTURE(c);
    CHECK(column(report_csv, c) == column(ma, c));
  }
}

TEST_CASE("simulate: several seeds and the distributed layout") {
  TempDir t;
  const fs::path cfg = write_config(
      t.path, R"({"substrate":{"nodes":12,"links":24},"workload":{"requests":15,"vn_nodes_high":4},)"
              R"("swarm":{"population":6,"iterations":5},"datacenters":{"count":3,"nodes":8,"links":14}})");
  REQUIRE(run("simulate --config " + cfg.string() + " --seeds 3 --seed 10 --out " + t.path.string()) == 0);
  const std::string summary = read_file(t.path / "summary.csv");
  CHECK(column(summary, 0) == std::vector<std::string>{"seed", "10", "11", "12"});
  CHECK(fs::exists(t.path / "seed_11" / "log.jsonl"));
  REQUIRE(run("simulate --config " + cfg.string() + " --embedder distributed --out " + (t.path / "d").string()) == 0);
  CHECK(parse_log_jsonl(read_file(t.path / "d" / "log.jsonl")).size() == 15);
  CHECK(run("simulate --config " + cfg.string() + " --embedder annealing --out " + t.path.string()) == 2);
  CHECK(run("simulate --config " + cfg.string() + " --seeds 0 --out " + t.path.string()) == 2);
}
