#include "config.hpp"

#include <set>

#include "io.hpp"
#include "json.hpp"

namespace vne::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw InputError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void take(const json& obj, const char* key, T& into, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + "." + key + " has the wrong type");
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

const char* init_name(InitSampling s) { return s == InitSampling::uniform ? "uniform" : "resource_weighted"; }

}  // namespace

void ExperimentConfig::validate() const {
  require(substrate.nodes >= 2, "substrate.nodes must be >= 2");
  require(substrate.links >= substrate.nodes - 1, "substrate.links must be >= nodes - 1");
  require(static_cast<long long>(substrate.links) <=
              static_cast<long long>(substrate.nodes) * (substrate.nodes - 1) / 2,
          "substrate.links exceeds the number of node pairs");
  require(substrate.bw_low > 0 && substrate.bw_low < substrate.bw_high, "substrate bandwidth range is invalid");
  require(!substrate.profiles.empty(), "at least one server profile is required");
  for (const ServerProfile& p : substrate.profiles) {
    require(p.cpu_capacity > 0, "profile " + p.name + ": cpu must be > 0");
    require(p.power_full > p.power_baseline && p.power_baseline > 0, "profile " + p.name + ": need p_full > p_base > 0");
  }

  const WorkloadParams& w = workload;
  require(w.n_requests >= 1, "workload.requests must be >= 1");
  require(w.arrival_rate > 0, "workload.arrival_rate must be > 0");
  require(w.lifetime_low > 0 && w.lifetime_low <= w.lifetime_high, "workload lifetime range is invalid");
  require(w.vn_size_low >= 2 && w.vn_size_low <= w.vn_size_high, "workload node-count range is invalid");
  require(w.vn.connectivity > 0 && w.vn.connectivity <= 1, "workload.connectivity must be in (0, 1]");
  require(!w.vn.cpu_choices.empty(), "workload.cpu_choices must be nonempty");
  for (double c : w.vn.cpu_choices) require(c > 0, "workload.cpu_choices must be positive");
  require(w.vn.bw_low > 0 && w.vn.bw_low <= w.vn.bw_high, "workload bandwidth range is invalid");

  try {
    swarm.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("swarm: ") + e.what());
  }

  const DataCenterParams& d = datacenters;
  require(d.count >= 1, "datacenters.count must be >= 1");
  require(d.nodes >= 2, "datacenters.nodes must be >= 2");
  require(d.links >= d.nodes - 1 && static_cast<long long>(d.links) <= static_cast<long long>(d.nodes) * (d.nodes - 1) / 2,
          "datacenters.links is out of range");
  require(d.inter_bw >= 0, "datacenters.inter_bw must be >= 0");
  require(bucket > 0, "bucket must be > 0");
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, "config",
                 {"seed", "substrate", "workload", "embedder", "swarm", "datacenters", "bucket", "out"});
  ExperimentConfig cfg;
  take(root, "seed", cfg.seed, "config");
  take(root, "bucket", cfg.bucket, "config");
  std::string out = cfg.out.string();
  take(root, "out", out, "config");
  cfg.out = out;
  if (root.contains("embedder")) {
    std::string name;
    take(root, "embedder", name, "config");
    try {
      cfg.embedder = parse_embedder(name);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }

  if (root.contains("substrate")) {
    const json& s = root["substrate"];
    reject_unknown(s, "substrate", {"nodes", "links", "bw_low", "bw_high", "profiles"});
    take(s, "nodes", cfg.substrate.nodes, "substrate");
    take(s, "links", cfg.substrate.links, "substrate");
    take(s, "bw_low", cfg.substrate.bw_low, "substrate");
    take(s, "bw_high", cfg.substrate.bw_high, "substrate");
    if (s.contains("profiles")) {
      if (!s["profiles"].is_array()) throw InputError("substrate.profiles must be an array");
      cfg.substrate.profiles.clear();
      for (const json& p : s["profiles"]) {
        reject_unknown(p, "profile", {"name", "cpu", "p_base", "p_full"});
        ServerProfile prof{"", 0, 0, 0};
        take(p, "name", prof.name, "profile");
        take(p, "cpu", prof.cpu_capacity, "profile");
        take(p, "p_base", prof.power_baseline, "profile");
        take(p, "p_full", prof.power_full, "profile");
        cfg.substrate.profiles.push_back(prof);
      }
    }
  }

  if (root.contains("workload")) {
    const json& w = root["workload"];
    reject_unknown(w, "workload",
                   {"requests", "arrival_rate", "lifetime_low", "lifetime_high", "vn_nodes_low", "vn_nodes_high",
                    "connectivity", "cpu_choices", "bw_low", "bw_high"});
    WorkloadParams& p = cfg.workload;
    take(w, "requests", p.n_requests, "workload");
    take(w, "arrival_rate", p.arrival_rate, "workload");
    take(w, "lifetime_low", p.lifetime_low, "workload");
    take(w, "lifetime_high", p.lifetime_high, "workload");
    take(w, "vn_nodes_low", p.vn_size_low, "workload");
    take(w, "vn_nodes_high", p.vn_size_high, "workload");
    take(w, "connectivity", p.vn.connectivity, "workload");
    take(w, "cpu_choices", p.vn.cpu_choices, "workload");
    take(w, "bw_low", p.vn.bw_low, "workload");
    take(w, "bw_high", p.vn.bw_high, "workload");
  }

  if (root.contains("swarm")) {
    const json& s = root["swarm"];
    reject_unknown(s, "swarm",
                   {"population", "iterations", "stall_iterations", "alpha", "max_hops", "backtrack_factor", "init"});
    SwarmParams& p = cfg.swarm;
    take(s, "population", p.population, "swarm");
    take(s, "iterations", p.max_iterations, "swarm");
    take(s, "stall_iterations", p.stall_iterations, "swarm");
    take(s, "alpha", p.alpha, "swarm");
    take(s, "max_hops", p.max_hops, "swarm");
    take(s, "backtrack_factor", p.backtrack_factor, "swarm");
    if (s.contains("init")) {
      std::string init;
      take(s, "init", init, "swarm");
      if (init == "resource_weighted") {
        p.init = InitSampling::resource_weighted;
      } else if (init == "uniform") {
        p.init = InitSampling::uniform;
      } else {
        throw InputError("swarm.init must be resource_weighted or uniform");
      }
    }
  }

  if (root.contains("datacenters")) {
    const json& d = root["datacenters"];
    reject_unknown(d, "datacenters", {"count", "nodes", "links", "inter_bw"});
    take(d, "count", cfg.datacenters.count, "datacenters");
    take(d, "nodes", cfg.datacenters.nodes, "datacenters");
    take(d, "links", cfg.datacenters.links, "datacenters");
    take(d, "inter_bw", cfg.datacenters.inter_bw, "datacenters");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string dump_config(const ExperimentConfig& cfg) {
  json profiles = json::array();
  for (const ServerProfile& p : cfg.substrate.profiles) {
    profiles.push_back({{"name", p.name}, {"cpu", p.cpu_capacity}, {"p_base", p.power_baseline}, {"p_full", p.power_full}});
  }
  const WorkloadParams& w = cfg.workload;
  const SwarmParams& s = cfg.swarm;
  const json root = {
      {"seed", cfg.seed},
      {"substrate",
       {{"nodes", cfg.substrate.nodes},
        {"links", cfg.substrate.links},
        {"bw_low", cfg.substrate.bw_low},
        {"bw_high", cfg.substrate.bw_high},
        {"profiles", profiles}}},
      {"workload",
       {{"requests", w.n_requests},
        {"arrival_rate", w.arrival_rate},
        {"lifetime_low", w.lifetime_low},
        {"lifetime_high", w.lifetime_high},
        {"vn_nodes_low", w.vn_size_low},
        {"vn_nodes_high", w.vn_size_high},
        {"connectivity", w.vn.connectivity},
        {"cpu_choices", w.vn.cpu_choices},
        {"bw_low", w.vn.bw_low},
        {"bw_high", w.vn.bw_high}}},
      {"embedder", to_string(cfg.embedder)},
      {"swarm",
       {{"population", s.population},
        {"iterations", s.max_iterations},
        {"stall_iterations", s.stall_iterations},
        {"alpha", s.alpha},
        {"max_hops", s.max_hops},
        {"backtrack_factor", s.backtrack_factor},
        {"init", init_name(s.init)}}},
      {"datacenters",
       {{"count", cfg.datacenters.count},
        {"nodes", cfg.datacenters.nodes},
        {"links", cfg.datacenters.links},
        {"inter_bw", cfg.datacenters.inter_bw}}},
      {"bucket", cfg.bucket},
  };
  return root.dump(2) + "\n";
}

SubstrateNetwork build_substrate(const ExperimentConfig& cfg, std::uint64_t seed) {
  return generate_waxman_substrate(cfg.substrate.nodes, cfg.substrate.links, cfg.substrate.bw_low,
                                   cfg.substrate.bw_high, cfg.substrate.profiles, derive_seed(seed, 1));
}

DataCenterSet build_datacenters(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.embedder != EmbedderKind::distributed) return single_center(build_substrate(cfg, seed));
  DataCenterSet dcs;
  const DataCenterParams& d = cfg.datacenters;
  for (int k = 0; k < d.count; ++k) {
    SubstrateNetwork sn = generate_waxman_substrate(d.nodes, d.links, cfg.substrate.bw_low, cfg.substrate.bw_high,
                                                    cfg.substrate.profiles,
                                                    derive_seed(seed, 0x100 + static_cast<std::uint64_t>(k)));
    dcs.add_center(std::move(sn), 0);
  }
  for (int a = 0; a < d.count; ++a) {
    for (int b = a + 1; b < d.count; ++b) dcs.add_link(a, b, d.inter_bw);
  }
  return dcs;
}

}  // namespace vne::cli
