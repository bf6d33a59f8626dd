#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "echelon/ablation.hpp"
#include "echelon/errors.hpp"
#include "echelon/export.hpp"
#include "echelon/harness.hpp"
#include "echelon/mock_agents.hpp"
#include "echelon/prompt.hpp"
#include "echelon/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace echelon;

namespace {

constexpr int kExitRunFailure = 1;
constexpr int kExitUsage = 2;

/// Settings shared by every command that talks to an LLM (live or mock).
struct LlmOptions {
  bool live = false;
  std::string mock;
  std::string model = "gpt-4";
  std::string endpoint = HttpClientConfig{}.endpoint;
  double temperature = 1.0;
  double timeout_seconds = 60;
  int retries = 3;
};

struct FlagOptions {
  bool no_demand = false;
  bool no_downstream = false;
  bool strategy = false;
  bool no_cot = false;
  bool no_history = false;
  std::string menu;
};

struct RunArgs {
  std::string scenario = "constant";
  int episodes = 100;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::string out;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

ActionMenu parse_menu(const std::string& text) {
  ActionMenu menu;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      menu.push_back(v);
    } catch (const std::exception&) {
      throw InputError("menu entries must be non-negative integers: '" + item + "'");
    }
  }
  if (menu.empty()) throw InputError("menu must list at least one quantity");
  return menu;
}

PromptFlags apply_flags(PromptFlags flags, const FlagOptions& o) {
  if (o.no_demand) flags.include_demand = false;
  if (o.no_downstream) flags.include_downstream = false;
  if (o.strategy) flags.include_strategy = true;
  if (o.no_cot) flags.chain_of_thought = false;
  if (o.no_history) flags.keep_history = false;
  if (!o.menu.empty()) flags.restricted_menu = parse_menu(o.menu);
  return flags;
}

AgentConfig make_agent_config(const LlmOptions& llm, const PromptFlags& flags) {
  AgentConfig config;
  config.flags = flags;
  config.model = llm.model;
  config.temperature = llm.temperature;
  config.timeout = std::chrono::milliseconds(static_cast<long long>(std::llround(llm.timeout_seconds * 1000)));
  config.retry_limit = llm.retries;
  return config;
}

std::shared_ptr<const ChatClient> make_client(const LlmOptions& llm, const std::string& default_mock) {
  if (llm.live) {
    HttpClientConfig http;
    http.endpoint = llm.endpoint;
    return std::make_shared<HttpChatClient>(http);
  }
  return std::make_shared<MockClient>(named_responder(llm.mock.empty() ? default_mock : llm.mock));
}

/// Orders per stage from {"orders": [[...], ...]} or from a recorded episode.
std::vector<std::vector<Units>> load_scripted_orders(const fs::path& path) {
  const auto text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("scripted policy file " + path.string() + ": " + e.what());
  }
  if (j.contains("orders")) return j.at("orders").get<std::vector<std::vector<Units>>>();
  const auto record = record_from_json(text);
  std::vector<std::vector<Units>> orders(static_cast<std::size_t>(record.num_stages));
  for (const auto& row : record.periods) {
    for (std::size_t m = 0; m < row.stages.size(); ++m) orders[m].push_back(row.stages[m].order);
  }
  return orders;
}

std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string padded(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

void write_artifacts(const fs::path& out, const ManifestInfo& manifest, const ExperimentResult& result) {
  fs::create_directories(out);
  write_text_file(out / "manifest.json", manifest_json(manifest));
  write_text_file(out / "summary.csv", summary_csv({result.summary}));
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& record = result.records[i];
    write_text_file(out / "episodes" / (padded(i) + ".json"), record_to_json(record));
    if (!record.periods.empty()) export_timeseries(record, out / "plots", padded(i));
    if (!record.transcript.empty()) {
      for (int m = 0; m < record.num_stages; ++m) {
        write_text_file(out / "transcripts" / (padded(i) + "_stage" + std::to_string(m + 1) + ".jsonl"),
                        transcript_jsonl(record, m));
      }
    }
  }
}

void add_run_options(CLI::App* cmd, RunArgs& run) {
  cmd->add_option("--episodes,-n", run.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", run.seed, "Base seed; episode i uses a seed derived from (seed, i)");
  cmd->add_option("--parallel,-j", run.parallel, "Worker threads (0 = all cores)");
  cmd->add_option("--out,-o", run.out, "Output directory for artifacts");
}

/// Registers LLM and prompt options; returns them so callers can test whether any was given.
std::vector<CLI::Option*> add_llm_options(CLI::App* cmd, LlmOptions& llm, FlagOptions& flags) {
  const std::string group = "LLM agent";
  std::vector<CLI::Option*> opts{
      cmd->add_flag("--live", llm.live, "Query a real chat-completion endpoint (needs OPENAI_API_KEY)"),
      cmd->add_option("--mock", llm.mock, "Offline responder: a heuristic preset name or 'follow'"),
      cmd->add_option("--model", llm.model, "Model name sent to the endpoint"),
      cmd->add_option("--endpoint", llm.endpoint, "Chat-completion URL"),
      cmd->add_option("--temperature", llm.temperature, "Sampling temperature"),
      cmd->add_option("--timeout", llm.timeout_seconds, "Per-request timeout in seconds"),
      cmd->add_option("--retries", llm.retries, "Attempts per decision, including the first")
          ->check(CLI::PositiveNumber),
      cmd->add_flag("--no-demand", flags.no_demand, "Omit the demand description"),
      cmd->add_flag("--no-downstream", flags.no_downstream, "Omit the downstream order"),
      cmd->add_flag("--strategy", flags.strategy, "Include the strategy paragraph"),
      cmd->add_flag("--no-cot", flags.no_cot, "Ask for the action without reasoning"),
      cmd->add_flag("--no-history", flags.no_history, "Drop earlier rounds from each agent's history"),
      cmd->add_option("--menu", flags.menu, "Restrict actions to a comma-separated list, e.g. 0,4,8"),
  };
  for (auto* o : opts) o->group(group);
  return opts;
}

bool any_given(const std::vector<CLI::Option*>& opts) {
  for (const auto* o : opts) {
    if (o->count() > 0) return true;
  }
  return false;
}

int cmd_simulate(const RunArgs& run, const std::string& policy, const LlmOptions& llm, const FlagOptions& flag_opts,
                 bool llm_flags_given) {
  const auto config = resolve_scenario(run.scenario);
  PolicySpec spec;
  json settings = json::object();
  if (policy == "llm") {
    const auto flags = apply_flags(PromptFlags{}, flag_opts);
    spec = llm_spec("llm", make_client(llm, "base-stock"), make_agent_config(llm, flags));
    settings = {{"live", llm.live},
                {"mock", llm.live ? "" : (llm.mock.empty() ? "base-stock" : llm.mock)},
                {"model", llm.model},
                {"temperature", llm.temperature},
                {"retry_limit", llm.retries},
                {"include_demand", flags.include_demand},
                {"include_downstream", flags.include_downstream},
                {"include_strategy", flags.include_strategy},
                {"chain_of_thought", flags.chain_of_thought},
                {"keep_history", flags.keep_history}};
    if (flags.restricted_menu) settings["menu"] = *flags.restricted_menu;
  } else {
    if (llm_flags_given) throw InputError("LLM and prompt options only apply to --policy llm");
    if (policy.rfind("scripted:", 0) == 0) {
      const fs::path path = policy.substr(9);
      spec = scripted_spec("scripted", load_scripted_orders(path));
      settings = {{"file", path.string()}};
    } else if (policy.rfind("random:", 0) == 0) {
      spec = random_spec(std::stoll(policy.substr(7)));
    } else {
      spec = preset_spec(policy);
    }
  }

  RunOptions options{run.episodes, run.seed, run.parallel, !run.out.empty()};
  const auto result = run_experiment(config, spec, options);
  const auto& s = result.summary;
  std::cout << s.scenario << "  " << s.policy << "  episodes=" << s.num_episodes << "  seed=" << s.base_seed << "\n"
            << "reward: " << format_mean_std(s.mean_reward, s.std_reward) << "\n";

  if (!run.out.empty()) {
    ManifestInfo manifest{"simulate", scenario_to_json(config), spec.id, run.seed, run.episodes, run.parallel,
                          settings.dump()};
    write_artifacts(run.out, manifest, result);
    std::cout << "artifacts: " << run.out << "\n";
  }
  for (const auto& e : s.errors) std::cerr << "error: " << e << "\n";
  return s.partial ? kExitRunFailure : 0;
}

int cmd_benchmark(const RunArgs& run, const std::string& scenarios_arg, const std::string& policies_arg, bool csv) {
  std::vector<ScenarioConfig> scenarios;
  for (const auto& name : scenarios_arg.empty() ? preset_scenario_names() : split_list(scenarios_arg))
    scenarios.push_back(resolve_scenario(name));
  std::vector<PolicySpec> policies;
  for (const auto& name : policies_arg.empty() ? heuristic_preset_names() : split_list(policies_arg))
    policies.push_back(preset_spec(name));

  const auto table = benchmark_table(scenarios, policies, RunOptions{run.episodes, run.seed, run.parallel, false});
  std::cout << (csv ? table.to_csv() : table.to_text());
  if (!run.out.empty()) {
    fs::create_directories(run.out);
    write_text_file(fs::path(run.out) / "benchmark.csv", table.to_csv());
    write_text_file(fs::path(run.out) / "benchmark.txt", table.to_text());
    std::vector<RunSummary> cells;
    for (const auto& row : table.cells) cells.insert(cells.end(), row.begin(), row.end());
    write_text_file(fs::path(run.out) / "summary.csv", summary_csv(cells));
  }
  for (const auto& row : table.cells) {
    for (const auto& cell : row) {
      for (const auto& e : cell.errors) std::cerr << "error: " << cell.policy << " / " << cell.scenario << ": " << e << "\n";
    }
  }
  return table.complete() ? 0 : kExitRunFailure;
}

int cmd_ablate(const RunArgs& run, const std::string& rows_arg, const LlmOptions& llm, const std::string& menu) {
  const auto config = resolve_scenario(run.scenario);
  std::vector<const AblationRow*> rows;
  if (rows_arg.empty()) {
    for (const auto& row : ablation_matrix()) rows.push_back(&row);
  } else {
    for (const auto& id : split_list(rows_arg)) rows.push_back(&find_ablation_row(id));
  }
  const auto client = make_client(llm, "follow");
  const RunOptions options{run.episodes, run.seed, run.parallel, false};
  auto run_row = [&](const AblationRow& row) {
    auto flags = row.flags;
    if (!menu.empty()) flags.restricted_menu = parse_menu(menu);
    return run_experiment(config, llm_spec(row.id, client, make_agent_config(llm, flags)), options).summary;
  };

  // Δ% is always relative to the first matrix row, even when it is not displayed.
  const auto& base_row = ablation_matrix().front();
  std::optional<RunSummary> base;
  std::vector<RunSummary> summaries;
  for (const auto* row : rows) {
    summaries.push_back(run_row(*row));
    if (row->id == base_row.id) base = summaries.back();
  }
  if (!base) base = run_row(base_row);

  bool ok = !base->partial;
  std::printf("%-26s %-20s %10s\n", "setting", "reward", "delta");
  for (const auto& s : summaries) {
    ok = ok && !s.partial;
    const std::string reward = s.partial ? "ERROR" : format_mean_std(s.mean_reward, s.std_reward);
    std::string delta = "n/a";
    if (!s.partial && !base->partial && base->mean_reward != 0)
      delta = fixed2(delta_percent(s.mean_reward, base->mean_reward)) + "%";
    std::printf("%-26s %-20s %10s\n", s.policy.c_str(), reward.c_str(), delta.c_str());
    for (const auto& e : s.errors) std::cerr << "error: " << s.policy << ": " << e << "\n";
  }
  if (!run.out.empty()) {
    fs::create_directories(run.out);
    write_text_file(fs::path(run.out) / "summary.csv", summary_csv(summaries));
  }
  return ok ? 0 : kExitRunFailure;
}

struct RenderArgs {
  std::string scenario = "constant";
  int stage = 1;
  int period = 1;
  std::string episode;
  std::optional<Units> downstream_order;
  bool system = false;
  std::string output;
};

int cmd_render_prompt(const RenderArgs& args, const FlagOptions& flag_opts) {
  auto config = resolve_scenario(args.scenario);
  std::optional<EpisodeRecord> record;
  if (!args.episode.empty()) {
    record = record_from_json(read_text_file(args.episode));
    if (record->num_stages != config.num_stages())
      throw InputError("episode has " + std::to_string(record->num_stages) + " stages but the scenario has " +
                       std::to_string(config.num_stages()));
  }
  const int m = args.stage - 1;
  if (m < 0 || m >= config.num_stages())
    throw InputError("stage must be in 1.." + std::to_string(config.num_stages()) + ", got " +
                     std::to_string(args.stage));
  if (args.period < 1 || args.period > config.num_periods)
    throw InputError("period must be in 1.." + std::to_string(config.num_periods) + ", got " +
                     std::to_string(args.period));
  if (args.period > 1 && (!record || static_cast<int>(record->periods.size()) < args.period - 1))
    throw InputError("period " + std::to_string(args.period) + " needs --episode covering the earlier periods");

  // Rebuild the state at the start of the requested period from the recorded orders and demand.
  auto state = initial_state(config);
  for (int t = 1; t < args.period; ++t) {
    const auto& row = record->periods[static_cast<std::size_t>(t - 1)];
    ActionVector orders;
    for (const auto& s : row.stages) orders.push_back(s.order);
    advance(config, state, orders, row.demand);
  }
  const auto flags = apply_flags(PromptFlags{}, flag_opts);
  auto downstream = args.downstream_order;
  if (!downstream && m > 0 && record && static_cast<int>(record->periods.size()) >= args.period)
    downstream = record->periods[static_cast<std::size_t>(args.period - 1)].stages[static_cast<std::size_t>(m - 1)].order;

  std::string text;
  if (args.system) text = render_system_message(m, config.num_stages()) + "\n\n";
  text += render_round_prompt(observe(config, state, m), args.period, config, downstream, flags);
  if (args.output.empty()) {
    std::cout << text;
  } else {
    write_text_file(args.output, text);
  }
  return 0;
}

int cmd_list() {
  std::cout << "scenarios:\n";
  for (const auto& name : preset_scenario_names()) std::cout << "  " << name << "\n";
  std::cout << "policies:\n";
  for (const auto& name : heuristic_preset_names()) std::cout << "  " << name << "\n";
  std::cout << "  llm\n  scripted:<file>\n  random:<max-order>\n";
  std::cout << "ablation settings:\n";
  for (const auto& row : ablation_matrix()) std::cout << "  " << row.id << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-echelon inventory simulator with heuristic and LLM ordering agents", "echelon"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunArgs sim_run;
  std::string sim_policy = "base-stock";
  LlmOptions sim_llm;
  FlagOptions sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Run one policy on one scenario");
  simulate->add_option("--scenario,-s", sim_run.scenario, "Preset name or scenario JSON file");
  simulate->add_option("--policy,-p", sim_policy, "Heuristic preset, 'llm', 'scripted:<file>' or 'random:<max>'");
  add_run_options(simulate, sim_run);
  const auto sim_llm_opts = add_llm_options(simulate, sim_llm, sim_flags);

  RunArgs bench_run;
  std::string bench_scenarios, bench_policies;
  bool bench_csv = false;
  auto* benchmark = app.add_subcommand("benchmark", "Run heuristic presets over scenarios and print a table");
  benchmark->add_option("--scenarios", bench_scenarios, "Comma-separated scenarios (default: all presets)");
  benchmark->add_option("--policies", bench_policies, "Comma-separated heuristic presets (default: all)");
  benchmark->add_flag("--csv", bench_csv, "Print CSV instead of a text table");
  add_run_options(benchmark, bench_run);

  RunArgs abl_run;
  abl_run.scenario = "variable";
  abl_run.episodes = 5;
  std::string abl_rows;
  LlmOptions abl_llm;
  FlagOptions abl_flags;
  auto* ablate = app.add_subcommand("ablate", "Compare prompt settings for the LLM agents");
  ablate->add_option("--scenario,-s", abl_run.scenario, "Preset name or scenario JSON file");
  ablate->add_option("--flags", abl_rows, "Comma-separated settings to run (default: all; see 'list')");
  add_run_options(ablate, abl_run);
  for (auto* o : std::vector<CLI::Option*>{
           ablate->add_flag("--live", abl_llm.live, "Query a real chat-completion endpoint (needs OPENAI_API_KEY)"),
           ablate->add_option("--mock", abl_llm.mock, "Offline responder: a heuristic preset name or 'follow'"),
           ablate->add_option("--model", abl_llm.model, "Model name sent to the endpoint"),
           ablate->add_option("--endpoint", abl_llm.endpoint, "Chat-completion URL"),
           ablate->add_option("--temperature", abl_llm.temperature, "Sampling temperature"),
           ablate->add_option("--timeout", abl_llm.timeout_seconds, "Per-request timeout in seconds"),
           ablate->add_option("--retries", abl_llm.retries, "Attempts per decision")->check(CLI::PositiveNumber),
           ablate->add_option("--menu", abl_flags.menu, "Restrict actions to a comma-separated list"),
       })
    o->group("LLM agent");

  RenderArgs render;
  FlagOptions render_flags;
  auto* render_cmd = app.add_subcommand("render-prompt", "Print the prompt an agent would receive");
  render_cmd->add_option("--scenario,-s", render.scenario, "Preset name or scenario JSON file");
  render_cmd->add_option("--stage", render.stage, "Stage, 1 = retailer");
  render_cmd->add_option("--period", render.period, "Round number, starting at 1");
  render_cmd->add_option("--episode", render.episode, "Episode JSON to replay up to the period");
  render_cmd->add_option("--downstream-order", render.downstream_order, "Order received from the stage below");
  render_cmd->add_flag("--system", render.system, "Print the system message first");
  render_cmd->add_option("--output", render.output, "Write to a file instead of stdout");
  render_cmd->add_flag("--no-demand", render_flags.no_demand, "Omit the demand description");
  render_cmd->add_flag("--no-downstream", render_flags.no_downstream, "Omit the downstream order");
  render_cmd->add_flag("--strategy", render_flags.strategy, "Include the strategy paragraph");
  render_cmd->add_flag("--no-cot", render_flags.no_cot, "Ask for the action without reasoning");
  render_cmd->add_option("--menu", render_flags.menu, "Restrict actions to a comma-separated list");

  auto* list = app.add_subcommand("list", "List scenarios, policies and ablation settings");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(sim_run, sim_policy, sim_llm, sim_flags, any_given(sim_llm_opts));
    if (*benchmark) return cmd_benchmark(bench_run, bench_scenarios, bench_policies, bench_csv);
    if (*ablate) return cmd_ablate(abl_run, abl_rows, abl_llm, abl_flags.menu);
    if (*render_cmd) return cmd_render_prompt(render, render_flags);
    if (*list) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
