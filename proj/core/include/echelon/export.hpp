#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "echelon/harness.hpp"

namespace echelon {

std::string record_to_json(const EpisodeRecord& record);
EpisodeRecord record_from_json(std::string_view text);

/// One row per (period, stage): period,stage,inventory,backlog,order,fulfilled,sales,profit,demand.
std::string timeseries_csv(const EpisodeRecord& record);

/// Four stacked line charts (inventory, backlog, order, profit) with one series per stage.
std::string timeseries_svg(const EpisodeRecord& record);

struct ExportedFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.svg, creating dir. Throws
/// std::filesystem::filesystem_error on I/O failure.
ExportedFiles export_timeseries(const EpisodeRecord& record, const std::filesystem::path& dir, const std::string& stem);

/// Ordered JSON lines for one stage of one episode.
std::string transcript_jsonl(const EpisodeRecord& record, int stage);

std::string summary_csv(const std::vector<RunSummary>& summaries);

struct ManifestInfo {
  std::string command;
  std::string scenario_json;
  std::string policy;
  std::uint64_t base_seed = 0;
  int num_episodes = 0;
  int parallelism = 1;
  std::string extra_json = "{}";  // policy settings, merged under "policy_settings"
};

std::string manifest_json(const ManifestInfo& info);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace echelon
