#include "echelon/export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "echelon/errors.hpp"
#include "echelon/prompt.hpp"
#include "echelon/version.hpp"

namespace echelon {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ChatRole role_from_string(const std::string& s) {
  if (s == "system") return ChatRole::kSystem;
  if (s == "assistant") return ChatRole::kAssistant;
  return ChatRole::kUser;
}

ordered_json transcript_entry_json(const TranscriptEntry& e) {
  return {{"stage", e.stage_index},  {"period", e.period},   {"attempt", e.attempt},
          {"role", to_string(e.role)}, {"content", e.content}, {"warning", e.warning}};
}

std::string stage_label(int stage, int num_stages) {
  const auto role = role_name(stage, num_stages);
  return role.empty() ? "stage " + std::to_string(stage + 1) : std::string(role);
}

std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string record_to_json(const EpisodeRecord& record) {
  ordered_json j;
  j["scenario"] = record.scenario;
  j["seed"] = record.seed;
  j["num_stages"] = record.num_stages;
  j["num_periods"] = record.num_periods;
  j["initial_inventory"] = record.initial_inventory;
  j["valid"] = record.valid;
  j["error"] = record.error;
  j["episode_reward"] = record.episode_reward;
  j["fallbacks"] = record.fallbacks;
  ordered_json periods = ordered_json::array();
  for (const auto& row : record.periods) {
    ordered_json stages = ordered_json::array();
    for (const auto& s : row.stages) {
      stages.push_back({{"order", s.order},
                        {"fulfilled", s.fulfilled},
                        {"sales", s.sales},
                        {"inventory", s.inventory},
                        {"backlog", s.backlog},
                        {"profit", s.profit}});
    }
    periods.push_back({{"period", row.period}, {"demand", row.demand}, {"reward", row.reward}, {"stages", stages}});
  }
  j["periods"] = periods;
  ordered_json transcript = ordered_json::array();
  for (const auto& e : record.transcript) transcript.push_back(transcript_entry_json(e));
  j["transcript"] = transcript;
  return j.dump(2);
}

EpisodeRecord record_from_json(std::string_view text) {
  EpisodeRecord r;
  try {
    const json j = json::parse(text);
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.num_stages = j.at("num_stages").get<int>();
    r.num_periods = j.at("num_periods").get<int>();
    r.initial_inventory = j.at("initial_inventory").get<std::vector<Units>>();
    r.valid = j.value("valid", true);
    r.error = j.value("error", std::string());
    r.episode_reward = j.at("episode_reward").get<Money>();
    r.fallbacks = j.value("fallbacks", 0);
    for (const auto& p : j.at("periods")) {
      PeriodRow row;
      row.period = p.at("period").get<Period>();
      row.demand = p.at("demand").get<Units>();
      row.reward = p.at("reward").get<Money>();
      for (const auto& s : p.at("stages")) {
        row.stages.push_back(StageRow{s.at("order").get<Units>(), s.at("fulfilled").get<Units>(),
                                      s.at("sales").get<Units>(), s.at("inventory").get<Units>(),
                                      s.at("backlog").get<Units>(), s.at("profit").get<Money>()});
      }
      r.periods.push_back(std::move(row));
    }
    if (j.contains("transcript")) {
      for (const auto& e : j.at("transcript")) {
        r.transcript.push_back(TranscriptEntry{e.at("stage").get<int>(), e.at("period").get<Period>(),
                                               e.at("attempt").get<int>(),
                                               role_from_string(e.at("role").get<std::string>()),
                                               e.at("content").get<std::string>(), e.value("warning", false)});
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed episode record: ") + e.what());
  }
  return r;
}

std::string timeseries_csv(const EpisodeRecord& record) {
  std::ostringstream out;
  out << "period,stage,inventory,backlog,order,fulfilled,sales,profit,demand\n";
  for (const auto& row : record.periods) {
    for (std::size_t m = 0; m < row.stages.size(); ++m) {
      const auto& s = row.stages[m];
      out << row.period << ',' << m + 1 << ',' << s.inventory << ',' << s.backlog << ',' << s.order << ','
          << s.fulfilled << ',' << s.sales << ',' << fixed2(s.profit) << ',' << row.demand << "\n";
    }
  }
  return out.str();
}

std::string timeseries_svg(const EpisodeRecord& record) {
  struct Panel {
    const char* title;
    double (*value)(const StageRow&);
  };
  static const Panel panels[] = {
      {"Inventory", [](const StageRow& s) { return static_cast<double>(s.inventory); }},
      {"Backlog", [](const StageRow& s) { return static_cast<double>(s.backlog); }},
      {"Order", [](const StageRow& s) { return static_cast<double>(s.order); }},
      {"Profit", [](const StageRow& s) { return s.profit; }},
  };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};

  constexpr double kWidth = 760, kPanelHeight = 170, kLeft = 60, kRight = 150, kTop = 30, kBottom = 30;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const int periods = std::max<int>(1, static_cast<int>(record.periods.size()));
  const std::size_t num_panels = std::size(panels);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kPanelHeight * static_cast<double>(num_panels) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < num_panels; ++p) {
    const double y0 = static_cast<double>(p) * kPanelHeight;
    double lo = 0, hi = 0;
    for (const auto& row : record.periods) {
      for (const auto& s : row.stages) {
        lo = std::min(lo, panels[p].value(s));
        hi = std::max(hi, panels[p].value(s));
      }
    }
    if (hi == lo) hi = lo + 1;
    auto x_of = [&](int period) {
      return kLeft + (periods == 1 ? 0.5 : static_cast<double>(period - 1) / (periods - 1)) * plot_w;
    };
    auto y_of = [&](double v) { return y0 + kTop + (hi - v) / (hi - lo) * plot_h; };

    svg << "<g>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << y0 + 18 << "\" font-weight=\"bold\">" << panels[p].title
        << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << y0 + kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y_of(hi) + 4 << "\" text-anchor=\"end\">" << fixed2(hi)
        << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y_of(lo) + 4 << "\" text-anchor=\"end\">" << fixed2(lo)
        << "</text>\n";
    for (int t = 1; t <= periods; ++t) {
      svg << "<text x=\"" << x_of(t) << "\" y=\"" << y0 + kTop + plot_h + 14 << "\" text-anchor=\"middle\">" << t
          << "</text>\n";
    }
    for (int m = 0; m < record.num_stages; ++m) {
      svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colors[m % std::size(colors)]
          << "\" points=\"";
      for (const auto& row : record.periods) {
        svg << x_of(row.period) << ',' << y_of(panels[p].value(row.stages[static_cast<std::size_t>(m)])) << ' ';
      }
      svg << "\"/>\n";
      svg << "<text x=\"" << kLeft + plot_w + 12 << "\" y=\"" << y0 + kTop + 12 + 14 * m << "\" fill=\""
          << colors[m % std::size(colors)] << "\">" << stage_label(m, record.num_stages) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::filesystem::filesystem_error("cannot open for writing", path,
                                            std::make_error_code(std::errc::io_error));
  out << text;
  if (!out)
    throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::filesystem::filesystem_error("cannot open for reading", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExportedFiles export_timeseries(const EpisodeRecord& record, const std::filesystem::path& dir,
                                const std::string& stem) {
  std::filesystem::create_directories(dir);
  ExportedFiles files{dir / (stem + ".csv"), dir / (stem + ".svg")};
  write_text_file(files.csv, timeseries_csv(record));
  write_text_file(files.svg, timeseries_svg(record));
  return files;
}

std::string transcript_jsonl(const EpisodeRecord& record, int stage) {
  std::string out;
  for (const auto& e : record.transcript) {
    if (e.stage_index != stage) continue;
    out += transcript_entry_json(e).dump();
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<RunSummary>& summaries) {
  std::ostringstream out;
  out << "scenario,policy,episodes,base_seed,mean_reward,std_reward,std_definition,wall_clock_seconds,partial\n";
  char buf[96];
  for (const auto& s : summaries) {
    std::snprintf(buf, sizeof buf, "%.4f,%.4f", s.mean_reward, s.std_reward);
    out << s.scenario << ',' << s.policy << ',' << s.num_episodes << ',' << s.base_seed << ',' << buf
        << ",population,";
    std::snprintf(buf, sizeof buf, "%.3f", s.wall_clock_seconds);
    out << buf << ',' << (s.partial ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string manifest_json(const ManifestInfo& info) {
  ordered_json j;
  j["software"] = "echelon";
  j["version"] = kVersion;
  j["command"] = info.command;
  j["scenario"] = ordered_json::parse(info.scenario_json);
  j["policy"] = info.policy;
  j["policy_settings"] = ordered_json::parse(info.extra_json);
  j["base_seed"] = info.base_seed;
  j["num_episodes"] = info.num_episodes;
  j["parallelism"] = info.parallelism;
  j["seed_derivation"] = "episode i uses episode_seed(base_seed, i); demand stream labelled \"demand\"";
  j["std_definition"] = "population";
  return j.dump(2);
}

}  // namespace echelon
