// vne_cli: generate topologies, run experiments, embed single requests and
// summarize logs. Exit codes: 0 success, 2 input error, 3 embedding rejected.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "io.hpp"
#include "vne/brite.hpp"
#include "vne/greedy.hpp"

namespace fs = std::filesystem;
using namespace vne;
using namespace vne::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRejected = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> embedder;
  std::optional<std::string> out;
  std::optional<double> bucket;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.embedder) {
    try {
      cfg.embedder = parse_embedder(*c.embedder);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (c.out) cfg.out = *c.out;
  if (c.bucket) cfg.bucket = *c.bucket;
  cfg.validate();
  return cfg;
}

std::string vn_file_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "vn/vn_%04d.brite", id);
  return buf;
}

std::vector<Vnr> build_workload(const ExperimentConfig& cfg, std::uint64_t seed) {
  return generate_workload(cfg.workload, derive_seed(seed, 2));
}

int cmd_generate(const Common& common) {
  const ExperimentConfig cfg = resolve(common);
  const DataCenterSet dcs = build_datacenters(cfg, cfg.seed);
  if (cfg.embedder == EmbedderKind::distributed) {
    for (std::size_t k = 0; k < dcs.size(); ++k) {
      write_atomic(cfg.out / ("dc_" + std::to_string(k) + ".brite"), write_brite(dcs.center(static_cast<int>(k)).network));
    }
  } else {
    write_atomic(cfg.out / "substrate.brite", write_brite(dcs.center(0).network));
  }
  const std::vector<Vnr> workload = build_workload(cfg, cfg.seed);
  std::vector<WorkloadIndexRow> index;
  for (const Vnr& v : workload) {
    const std::string file = vn_file_name(v.id);
    write_atomic(cfg.out / file, write_brite(v.graph));
    index.push_back({v.id, v.arrival_time, v.lifetime, file});
  }
  write_atomic(cfg.out / "workload.csv", workload_csv(index));
  write_atomic(cfg.out / "config.json", dump_config(cfg));
  std::cout << "wrote " << workload.size() << " requests to " << cfg.out.string() << "\n";
  return kExitOk;
}

DataCenterSet load_datacenters(const ExperimentConfig& cfg, const fs::path& dir) {
  if (cfg.embedder != EmbedderKind::distributed) {
    return single_center(read_brite_substrate(read_file(dir / "substrate.brite"), cfg.substrate.profiles));
  }
  DataCenterSet dcs;
  for (int k = 0; k < cfg.datacenters.count; ++k) {
    dcs.add_center(read_brite_substrate(read_file(dir / ("dc_" + std::to_string(k) + ".brite")), cfg.substrate.profiles), 0);
  }
  for (int a = 0; a < cfg.datacenters.count; ++a) {
    for (int b = a + 1; b < cfg.datacenters.count; ++b) dcs.add_link(a, b, cfg.datacenters.inter_bw);
  }
  return dcs;
}

std::vector<Vnr> load_workload(const fs::path& dir) {
  std::vector<Vnr> out;
  for (const WorkloadIndexRow& r : parse_workload_csv(read_file(dir / "workload.csv"))) {
    Vnr v;
    v.id = r.vnr_id;
    v.arrival_time = r.arrival;
    v.lifetime = r.lifetime;
    try {
      v.graph = read_brite_virtual(read_file(dir / r.file));
    } catch (const BriteParseError& e) {
      throw InputError(r.file + ": " + e.what());
    }
    out.push_back(std::move(v));
  }
  return out;
}

struct RunSummary {
  std::uint64_t seed = 0;
  int arrived = 0;
  int accepted = 0;
  double energy = 0;
  double revenue = 0;
  double cost = 0;
};

RunSummary summarize(std::uint64_t seed, const std::vector<VnrLogEntry>& log) {
  RunSummary s;
  s.seed = seed;
  for (const VnrLogEntry& e : log) {
    ++s.arrived;
    if (!e.accepted) continue;
    ++s.accepted;
    s.energy += e.energy;
    s.revenue += e.revenue;
    s.cost += e.cost;
  }
  return s;
}

int cmd_simulate(const Common& common, int seeds, const std::string& input) {
  if (seeds < 1) throw InputError("--seeds must be >= 1");
  const ExperimentConfig cfg = resolve(common);
  SimulationConfig sim;
  sim.embedder = cfg.embedder;
  sim.swarm = cfg.swarm;
  sim.bucket_width = cfg.bucket;

  std::vector<RunSummary> runs;
  for (int k = 0; k < seeds; ++k) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
    DataCenterSet dcs = input.empty() ? build_datacenters(cfg, seed) : load_datacenters(cfg, input);
    const std::vector<Vnr> workload = input.empty() ? build_workload(cfg, seed) : load_workload(input);
    const SimulationResult r = run_simulation(dcs, workload, sim, derive_seed(seed, 3));
    const fs::path dir = seeds == 1 ? cfg.out : cfg.out / ("seed_" + std::to_string(seed));
    write_atomic(dir / "metrics.csv", metrics_csv(r.series));
    write_atomic(dir / "log.jsonl", log_jsonl(r.log));
    runs.push_back(summarize(seed, r.log));
    const RunSummary& s = runs.back();
    std::cout << "seed " << seed << ": " << s.accepted << "/" << s.arrived << " accepted, energy "
              << format_double(s.energy) << ", R/C " << format_double(s.cost > 0 ? s.revenue / s.cost : 0.0) << "\n";
  }
  if (seeds > 1) {
    std::string csv = "seed,arrived,accepted,acceptance_ratio,energy,mean_energy_per_accepted,revenue,cost,rc_ratio\n";
    for (const RunSummary& s : runs) {
      const double ratio = s.arrived ? static_cast<double>(s.accepted) / s.arrived : 0.0;
      const double mean_e = s.accepted ? s.energy / s.accepted : 0.0;
      csv += std::to_string(s.seed) + ',' + std::to_string(s.arrived) + ',' + std::to_string(s.accepted) + ',' +
             format_double(ratio) + ',' + format_double(s.energy) + ',' + format_double(mean_e) + ',' +
             format_double(s.revenue) + ',' + format_double(s.cost) + ',' +
             format_double(s.cost > 0 ? s.revenue / s.cost : 0.0) + '\n';
    }
    write_atomic(cfg.out / "summary.csv", csv);
  }
  return kExitOk;
}

int cmd_embed(const Common& common, const std::string& substrate, const std::string& vn_file, double lifetime,
              const std::string& out_file) {
  const ExperimentConfig cfg = resolve(common);
  if (cfg.embedder == EmbedderKind::distributed) throw InputError("embed supports eapso and greedy");
  if (!(lifetime > 0)) throw InputError("--lifetime must be > 0");
  const SubstrateNetwork sn = read_brite_substrate(read_file(substrate), cfg.substrate.profiles);
  Vnr vnr;
  vnr.graph = read_brite_virtual(read_file(vn_file));
  vnr.lifetime = lifetime;
  const EmbedOutcome outcome = cfg.embedder == EmbedderKind::greedy
                                   ? greedy_embed(vnr, sn, cfg.swarm.max_hops, cfg.swarm.alpha)
                                   : embed_eapso(vnr, sn, cfg.swarm, cfg.seed);
  const std::string text = embedding_json(vnr, outcome, to_string(cfg.embedder));
  if (out_file.empty()) {
    std::cout << text;
  } else {
    write_atomic(out_file, text);
  }
  if (!outcome.accepted()) {
    std::cerr << "rejected: " << to_string(outcome.reason) << "\n";
    return kExitRejected;
  }
  return kExitOk;
}

std::string summary_text(const std::vector<VnrLogEntry>& log, const std::vector<MetricsRow>& rows) {
  const RunSummary s = summarize(0, log);
  double embed_ms = 0;
  for (const VnrLogEntry& e : log) embed_ms += e.embed_ms;
  const double horizon = rows.empty() ? 0.0 : rows.back().bucket_end;
  std::ostringstream o;
  o << "requests            " << s.arrived << "\n"
    << "accepted            " << s.accepted << "\n"
    << "acceptance_ratio    " << format_double(horizon > 0 ? acceptance_ratio(log, horizon) : 0.0) << "\n"
    << "energy              " << format_double(s.energy) << "\n"
    << "energy_per_accepted " << format_double(s.accepted ? s.energy / s.accepted : 0.0) << "\n"
    << "revenue             " << format_double(s.revenue) << "\n"
    << "cost                " << format_double(s.cost) << "\n"
    << "rc_ratio            " << format_double(horizon > 0 ? rc_ratio(log, horizon) : 0.0) << "\n"
    << "mean_embed_ms       " << format_double(s.arrived ? embed_ms / s.arrived : 0.0) << "\n\n";
  o << "bucket_end  arrived  accepted  acc_ratio  energy  achieved  rejected  rc_ratio  avail_cpu  avail_bw\n";
  for (const MetricsRow& r : rows) {
    o << format_double(r.bucket_end) << "  " << r.arrived << "  " << r.accepted << "  "
      << format_double(r.acceptance_ratio) << "  " << format_double(r.energy) << "  "
      << format_double(r.achieved_resources) << "  " << format_double(r.rejected_resources) << "  "
      << format_double(r.rc_ratio) << "  " << format_double(r.mean_available_cpu) << "  "
      << format_double(r.mean_available_bw) << "\n";
  }
  return o.str();
}

int cmd_report(const Common& common, const std::string& log_path, const std::vector<std::string>& substrates) {
  const ExperimentConfig cfg = resolve(common);
  const std::vector<VnrLogEntry> log = parse_log_jsonl(read_file(log_path));
  std::optional<CapacityTotals> cap;
  if (!substrates.empty()) {
    DataCenterSet dcs;
    for (const std::string& f : substrates) dcs.add_center(read_brite_substrate(read_file(f), cfg.substrate.profiles), 0);
    cap = capacity_totals(dcs);
  }
  const std::vector<MetricsRow> rows = metrics_from_log(log, cfg.bucket, cap ? &*cap : nullptr);
  const std::string text = summary_text(log, rows);
  std::cout << text;
  if (common.out) {
    write_atomic(cfg.out / "report.csv", metrics_csv(rows));
    write_atomic(cfg.out / "report.txt", text);
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--embedder", c.embedder, "eapso, greedy or distributed");
  if (with_out) cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--bucket", c.bucket, "Metrics bucket width in time units");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware virtual network embedding toolkit"};
  app.require_subcommand(1);

  Common common;
  int seeds = 1;
  std::string input;
  std::string substrate_file;
  std::string vn_file;
  std::string embed_out;
  double lifetime = 1;
  std::string log_path;
  std::vector<std::string> report_substrates;
  bool print_config = false;

  CLI::App* generate = app.add_subcommand("generate", "Write a substrate, request topologies and a workload index");
  add_common(generate, common);
  generate->add_flag("--print-config", print_config, "Print the resolved config and exit");

  CLI::App* simulate = app.add_subcommand("simulate", "Replay a workload and write metrics and a per-request log");
  add_common(simulate, common);
  simulate->add_option("--seeds", seeds, "Number of consecutive seeds to run");
  simulate->add_option("--input", input, "Directory written by 'generate'")->check(CLI::ExistingDirectory);

  CLI::App* embed = app.add_subcommand("embed", "Embed one request onto one substrate");
  add_common(embed, common, false);
  embed->add_option("--substrate", substrate_file, "Substrate BRITE file")->required()->check(CLI::ExistingFile);
  embed->add_option("--vn", vn_file, "Virtual network BRITE file")->required()->check(CLI::ExistingFile);
  embed->add_option("--lifetime", lifetime, "Request lifetime");
  embed->add_option("--out", embed_out, "Output JSON file (default: stdout)");

  CLI::App* report = app.add_subcommand("report", "Summarize a per-request log");
  add_common(report, common);
  report->add_option("--log", log_path, "JSON-lines log from 'simulate'")->required()->check(CLI::ExistingFile);
  report->add_option("--substrate", report_substrates, "Substrate BRITE file(s) for the availability columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (generate->parsed()) {
      if (print_config) {
        std::cout << dump_config(resolve(common));
        return kExitOk;
      }
      return cmd_generate(common);
    }
    if (simulate->parsed()) return cmd_simulate(common, seeds, input);
    if (embed->parsed()) return cmd_embed(common, substrate_file, vn_file, lifetime, embed_out);
    if (report->parsed()) return cmd_report(common, log_path, report_substrates);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const BriteParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
