#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "echelon/export.hpp"
#include "echelon/mock_agents.hpp"

namespace echelon {
namespace {

namespace fs = std::filesystem;

EpisodeRecord sample_record(const std::string& scenario = "variable", std::uint64_t seed = 11) {
  const auto config = preset_scenario(scenario);
  auto c = preset_spec("base-stock").make(config);
  return run_episode(config, *c, seed);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

/// Minimal structural check: every opened element is closed in order.
bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const auto end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    if (tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
  }
  return stack.empty();
}

TEST(TimeseriesCsv, OneRowPerPeriodAndStage) {
  const auto record = sample_record();
  const auto lines = lines_of(timeseries_csv(record));
  ASSERT_EQ(lines.size(), 1u + 12u * 4u);
  EXPECT_EQ(lines[0], "period,stage,inventory,backlog,order,fulfilled,sales,profit,demand");
  EXPECT_EQ(lines[1].rfind("1,1,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("1,4,", 0), 0u);
  EXPECT_EQ(lines.back().rfind("12,4,", 0), 0u);
}

TEST(TimeseriesCsv, ProfitsSumToEpisodeReward) {
  const auto record = sample_record("seasonal", 3);
  const auto lines = lines_of(timeseries_csv(record));
  double total = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cols;
    std::istringstream in(lines[i]);
    for (std::string col; std::getline(in, col, ',');) cols.push_back(col);
    ASSERT_EQ(cols.size(), 9u);
    total += std::stod(cols[7]);
    const auto t = std::stoi(cols[0]);
    EXPECT_EQ(std::stoll(cols[8]), record.periods[static_cast<std::size_t>(t - 1)].demand);
  }
  EXPECT_NEAR(total, record.episode_reward, 1e-6);
}

TEST(TimeseriesSvg, WellFormedWithFourPanels) {
  const auto svg = timeseries_svg(sample_record());
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_TRUE(well_formed_xml(svg));
  for (const char* title : {"Inventory", "Backlog", "Order", "Profit"}) EXPECT_NE(svg.find(title), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
  EXPECT_EQ(count, 16u);
}

TEST(ExportTimeseries, WritesBothFiles) {
  const auto dir = fs::temp_directory_path() / "echelon_export_test" / "nested";
  fs::remove_all(dir.parent_path());
  const auto record = sample_record();
  const auto files = export_timeseries(record, dir, "ep000");
  EXPECT_TRUE(fs::exists(files.csv));
  EXPECT_TRUE(fs::exists(files.svg));
  EXPECT_EQ(read_text_file(files.csv), timeseries_csv(record));
  fs::remove_all(dir.parent_path());
}

TEST(RecordJson, RoundTrip) {
  const auto record = sample_record("normal", 21);
  const auto back = record_from_json(record_to_json(record));
  EXPECT_EQ(back.scenario, record.scenario);
  EXPECT_EQ(back.seed, record.seed);
  EXPECT_EQ(back.initial_inventory, record.initial_inventory);
  EXPECT_EQ(back.periods, record.periods);
  EXPECT_EQ(back.episode_reward, record.episode_reward);
  EXPECT_EQ(back.valid, record.valid);
  EXPECT_THROW(record_from_json("{not json"), std::exception);
}

TEST(TranscriptJsonl, OrderedLinesPerStage) {
  const auto config = preset_scenario("constant");
  auto client = std::make_shared<MockClient>(preset_responder("base-stock"));
  auto c = llm_spec("llm", client, AgentConfig{}).make(config);
  const auto record = run_episode(config, *c, 0);
  ASSERT_TRUE(record.valid);
  EXPECT_EQ(record.episode_reward, -296.0);
  const auto lines = lines_of(transcript_jsonl(record, 2));
  // One prompt and one reply per round.
  ASSERT_EQ(lines.size(), 24u);
  int last_period = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    EXPECT_EQ(j.at("stage").get<int>(), 2);
    const int period = j.at("period").get<int>();
    EXPECT_GE(period, last_period);
    last_period = period;
    EXPECT_EQ(j.at("role").get<std::string>(), i % 2 == 0 ? "user" : "assistant");
  }
  EXPECT_TRUE(transcript_jsonl(record, 7).empty());
}

TEST(SummaryCsv, HeaderAndRow) {
  RunSummary s;
  s.scenario = "constant";
  s.policy = "base-stock";
  s.num_episodes = 5;
  s.mean_reward = -296;
  const auto lines = lines_of(summary_csv({s}));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].rfind("constant,base-stock,5,0,-296.0000,0.0000,population,", 0), 0u);
}

TEST(Manifest, ContainsProvenance) {
  ManifestInfo info;
  info.command = "simulate";
  info.scenario_json = scenario_to_json(preset_scenario("constant"));
  info.policy = "base-stock";
  info.num_episodes = 5;
  const auto j = nlohmann::json::parse(manifest_json(info));
  EXPECT_EQ(j.at("software"), "echelon");
  EXPECT_EQ(j.at("num_episodes"), 5);
  EXPECT_EQ(j.at("std_definition"), "population");
  EXPECT_EQ(j.at("scenario").at("name"), "constant");
}

}  // namespace
}  // namespace echelon
