#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vne/simulator.hpp"

namespace vne::cli {

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string metrics_csv(const std::vector<MetricsRow>& rows);
extern const char* const kMetricsHeader;

std::string log_jsonl(const std::vector<VnrLogEntry>& log);
std::vector<VnrLogEntry> parse_log_jsonl(const std::string& text);

struct WorkloadIndexRow {
  int vnr_id = 0;
  double arrival = 0;
  double lifetime = 0;
  std::string file;
};
std::string workload_csv(const std::vector<WorkloadIndexRow>& rows);
std::vector<WorkloadIndexRow> parse_workload_csv(const std::string& text);

std::string embedding_json(const Vnr& vnr, const EmbedOutcome& outcome, const char* embedder);

}  // namespace vne::cli
