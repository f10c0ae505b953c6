#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/generators.hpp"
#include "vne/partition.hpp"
#include "vne/simulator.hpp"
#include "vne/topology.hpp"

namespace vne::cli {

/// Bad user input: malformed files, unknown keys, out-of-range values.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubstrateParams {
  int nodes = 100;
  int links = 500;
  double bw_low = 50;
  double bw_high = 150;
  std::vector<ServerProfile> profiles = default_server_profiles();
};

/// Layout used by the distributed embedder: `count` generated data centers,
/// fully meshed by inter-DC links of `inter_bw`.
struct DataCenterParams {
  int count = 4;
  int nodes = 25;
  int links = 75;
  double inter_bw = 1000;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  SubstrateParams substrate;
  WorkloadParams workload;
  EmbedderKind embedder = EmbedderKind::eapso;
  SwarmParams swarm;
  DataCenterParams datacenters;
  double bucket = 1000;
  std::filesystem::path out = "out";

  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string dump_config(const ExperimentConfig& cfg);

SubstrateNetwork build_substrate(const ExperimentConfig& cfg, std::uint64_t seed);
/// Single substrate for eapso/greedy, the generated layout for distributed.
DataCenterSet build_datacenters(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace vne::cli
