#include "io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "config.hpp"
#include "json.hpp"
#include "vne/brite.hpp"

namespace vne::cli {

using nlohmann::json;

namespace {

// Fitness is +inf until a feasible particle exists; JSON has no infinity, so
// non-finite values travel as null.
json histories_to_json(const std::vector<std::vector<double>>& hs) {
  json out = json::array();
  for (const auto& h : hs) {
    json row = json::array();
    for (double v : h) {
      if (std::isfinite(v)) {
        row.push_back(v);
      } else {
        row.push_back(nullptr);
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<double>> histories_from_json(const json& j) {
  std::vector<std::vector<double>> out;
  for (const json& row : j) {
    std::vector<double> h;
    for (const json& v : row) h.push_back(v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>());
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

const char* const kMetricsHeader =
    "bucket_start,bucket_end,arrived,accepted,energy,acceptance_ratio,bucket_acceptance_ratio,"
    "achieved_resources,rejected_resources,revenue,long_term_revenue,rc_ratio,mean_available_cpu,"
    "mean_available_bw,mean_embed_ms";

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const MetricsRow& r : rows) {
    const double cells[] = {r.bucket_start,       r.bucket_end,        static_cast<double>(r.arrived),
                            static_cast<double>(r.accepted), r.energy, r.acceptance_ratio,
                            r.bucket_acceptance_ratio, r.achieved_resources, r.rejected_resources,
                            r.revenue,            r.long_term_revenue, r.rc_ratio,
                            r.mean_available_cpu, r.mean_available_bw, r.mean_embed_ms};
    bool first = true;
    for (double c : cells) {
      if (!first) out += ',';
      out += format_double(c);
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string log_jsonl(const std::vector<VnrLogEntry>& log) {
  std::string out;
  for (const VnrLogEntry& e : log) {
    json nodes = json::array();
    for (const NodePlacement& n : e.nodes) {
      nodes.push_back({{"dc", n.dc}, {"vnode", n.vnode}, {"host", n.host}, {"cpu", n.cpu}});
    }
    json links = json::array();
    for (const LinkPlacement& l : e.links) {
      links.push_back({{"dc", l.dc}, {"vlink", l.vlink}, {"path", l.path}, {"inter_link", l.inter_link}, {"bw", l.bw}});
    }
    const json row = {{"vnr_id", e.vnr_id},
                      {"arrival", e.arrival},
                      {"lifetime", e.lifetime},
                      {"accepted", e.accepted},
                      {"reason", e.reason},
                      {"energy", e.energy},
                      {"cost", e.cost},
                      {"revenue", e.revenue},
                      {"cpu_demand", e.cpu_demand},
                      {"bw_demand", e.bw_demand},
                      {"embed_ms", e.embed_ms},
                      {"nodes", nodes},
                      {"links", links},
                      {"best_histories", histories_to_json(e.best_histories)}};
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<VnrLogEntry> parse_log_jsonl(const std::string& text) {
  std::vector<VnrLogEntry> log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      VnrLogEntry e;
      e.vnr_id = j.at("vnr_id").get<int>();
      e.arrival = j.at("arrival").get<double>();
      e.lifetime = j.at("lifetime").get<double>();
      e.accepted = j.at("accepted").get<bool>();
      e.reason = j.at("reason").get<std::string>();
      e.energy = j.at("energy").get<double>();
      e.cost = j.at("cost").get<double>();
      e.revenue = j.at("revenue").get<double>();
      e.cpu_demand = j.at("cpu_demand").get<double>();
      e.bw_demand = j.at("bw_demand").get<double>();
      e.embed_ms = j.at("embed_ms").get<double>();
      for (const json& n : j.at("nodes")) {
        e.nodes.push_back({n.at("dc").get<int>(), n.at("vnode").get<NodeId>(), n.at("host").get<NodeId>(),
                           n.at("cpu").get<double>()});
      }
      for (const json& l : j.at("links")) {
        e.links.push_back({l.at("dc").get<int>(), l.at("vlink").get<LinkId>(), l.at("path").get<Path>(),
                           l.at("inter_link").get<int>(), l.at("bw").get<double>()});
      }
      e.best_histories = histories_from_json(j.at("best_histories"));
      if (!log.empty() && e.arrival < log.back().arrival) throw InputError("log is not in arrival order");
      log.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw InputError("log line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const InputError& ex) {
      throw InputError("log line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return log;
}

std::string workload_csv(const std::vector<WorkloadIndexRow>& rows) {
  std::string out = "vnr_id,arrival,lifetime,file\n";
  for (const WorkloadIndexRow& r : rows) {
    out += std::to_string(r.vnr_id) + ',' + format_double(r.arrival) + ',' + format_double(r.lifetime) + ',' + r.file +
           '\n';
  }
  return out;
}

std::vector<WorkloadIndexRow> parse_workload_csv(const std::string& text) {
  std::vector<WorkloadIndexRow> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "vnr_id,arrival,lifetime,file") throw InputError("workload index: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw InputError("workload index line " + std::to_string(line_no) + ": expected 4 fields");
    try {
      std::size_t used = 0;
      WorkloadIndexRow r;
      r.vnr_id = std::stoi(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("id");
      r.arrival = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("arrival");
      r.lifetime = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("lifetime");
      r.file = cells[3];
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw InputError("workload index line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

std::string embedding_json(const Vnr& vnr, const EmbedOutcome& outcome, const char* embedder) {
  json j = {{"embedder", embedder}, {"accepted", outcome.accepted()}};
  if (!outcome.accepted()) {
    j["reason"] = to_string(outcome.reason);
    return j.dump(2) + "\n";
  }
  const Embedding& e = *outcome.embedding;
  j["node_map"] = e.node_map;
  json links = json::array();
  for (std::size_t l = 0; l < e.link_map.size(); ++l) {
    const VirtualLink& vl = vnr.graph.links()[l];
    links.push_back({{"vlink", l}, {"a", vl.a}, {"b", vl.b}, {"bw", vl.bw_demand}, {"path", e.link_map[l]}});
  }
  j["link_map"] = links;
  j["energy"] = e.energy;
  j["cost"] = e.cost;
  j["revenue"] = revenue(vnr);
  j["fitness"] = e.fitness;
  j["best_history"] = outcome.best_history;
  return j.dump(2) + "\n";
}

}  // namespace vne::cli
