#include "echelon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <thread>

#include "echelon/errors.hpp"

namespace echelon {

Money episode_reward(const EpisodeRecord& record) {
  if (static_cast<int>(record.periods.size()) != record.num_periods)
    throw InputError("record covers " + std::to_string(record.periods.size()) + " of " +
                     std::to_string(record.num_periods) + " periods");
  Money total = 0;
  for (std::size_t i = 0; i < record.periods.size(); ++i) {
    const auto& row = record.periods[i];
    if (row.period != static_cast<Period>(i + 1)) throw InputError("record periods are not 1..T in order");
    for (const auto& s : row.stages) total += s.profit;
  }
  return total;
}

PolicyController::PolicyController(std::vector<std::unique_ptr<Policy>> policies) : policies_(std::move(policies)) {}

void PolicyController::reset(const ScenarioConfig& config, std::uint64_t episode_seed) {
  if (static_cast<int>(policies_.size()) != config.num_stages())
    throw InputError("need one policy per stage, got " + std::to_string(policies_.size()));
  config_ = &config;
  for (int m = 0; m < config.num_stages(); ++m) policies_[m]->reset(StageContext{m, &config, episode_seed});
}

ActionVector PolicyController::act(const std::vector<Observation>& observations, Period) {
  ActionVector actions;
  actions.reserve(policies_.size());
  for (std::size_t m = 0; m < policies_.size(); ++m) actions.push_back(policies_[m]->decide(observations[m], std::nullopt));
  return actions;
}

AgentController::AgentController(std::shared_ptr<const ChatClient> client, AgentConfig config)
    : client_(std::move(client)), config_(std::move(config)) {
  if (!client_) throw InputError("agent controller needs a chat client");
}

void AgentController::reset(const ScenarioConfig& config, std::uint64_t) {
  scenario_ = &config;
  sessions_ = make_sessions(config.num_stages());
  transcript_.clear();
  fallbacks_ = 0;
}

ActionVector AgentController::act(const std::vector<Observation>& observations, Period period) {
  if (scenario_ == nullptr) throw LifecycleError("agent controller used before reset");
  auto round = round_of_actions(sessions_, *client_, observations, period, *scenario_, config_);
  fallbacks_ += round.fallbacks;
  std::move(round.transcript.begin(), round.transcript.end(), std::back_inserter(transcript_));
  return round.actions;
}

std::vector<TranscriptEntry> AgentController::take_transcript() { return std::exchange(transcript_, {}); }

PolicySpec preset_spec(const std::string& name) {
  const auto rule = find_preset(name).rule;
  return {find_preset(name).name, [rule](const ScenarioConfig& config) {
            std::vector<std::unique_ptr<Policy>> policies;
            for (int m = 0; m < config.num_stages(); ++m) policies.push_back(std::make_unique<HeuristicPolicy>(rule));
            return std::make_unique<PolicyController>(std::move(policies));
          }};
}

PolicySpec scripted_spec(std::string id, std::vector<std::vector<Units>> orders_per_stage) {
  return {std::move(id), [orders = std::move(orders_per_stage)](const ScenarioConfig& config) {
            if (static_cast<int>(orders.size()) != config.num_stages())
              throw InputError("scripted orders need one sequence per stage");
            std::vector<std::unique_ptr<Policy>> policies;
            for (const auto& seq : orders) policies.push_back(std::make_unique<ScriptedPolicy>(seq));
            return std::make_unique<PolicyController>(std::move(policies));
          }};
}

PolicySpec random_spec(Units max_order) {
  return {"random-" + std::to_string(max_order), [max_order](const ScenarioConfig& config) {
            std::vector<std::unique_ptr<Policy>> policies;
            for (int m = 0; m < config.num_stages(); ++m) policies.push_back(std::make_unique<RandomPolicy>(max_order));
            return std::make_unique<PolicyController>(std::move(policies));
          }};
}

PolicySpec llm_spec(std::string id, std::shared_ptr<const ChatClient> client, AgentConfig config) {
  return {std::move(id), [client = std::move(client), config = std::move(config)](const ScenarioConfig&) {
            return std::make_unique<AgentController>(client, config);
          }};
}

EpisodeRecord run_episode(const ScenarioConfig& config, Controller& controller, std::uint64_t seed) {
  EpisodeRecord record;
  record.scenario = config.name;
  record.seed = seed;
  record.num_stages = config.num_stages();
  record.num_periods = config.num_periods;
  for (const auto& s : config.stages) record.initial_inventory.push_back(s.init_inventory);

  Environment env(config);
  env.reset(seed);
  try {
    controller.reset(env.config(), seed);
    while (!env.done()) {
      const auto observations = env.observe_all();
      const Period period = env.state().period;
      const auto actions = controller.act(observations, period);
      const auto step = env.step(actions);

      PeriodRow row;
      row.period = period;
      row.demand = step.demand;
      row.reward = step.total_reward_delta;
      for (int m = 0; m < config.num_stages(); ++m) {
        const auto& s = step.stages[m];
        row.stages.push_back(StageRow{actions[m], s.fulfilled, s.sales, s.inventory, s.backlog, s.profit});
      }
      record.periods.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    record.valid = false;
    record.error = e.what();
  }
  record.transcript = controller.take_transcript();
  record.fallbacks = controller.fallbacks();
  for (const auto& row : record.periods) {
    for (const auto& s : row.stages) record.episode_reward += s.profit;
  }
  return record;
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

std::string format_mean_std(double mean, double std) {
  // Avoid printing "-0.00" for tiny negative rounding noise.
  auto fix = [](double v) { return std::abs(v) < 0.005 ? 0.0 : v; };
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%.2f)", fix(mean), fix(std));
  return buf;
}

ExperimentResult run_experiment(const ScenarioConfig& config, const PolicySpec& policy, const RunOptions& options) {
  if (options.num_episodes < 1) throw InputError("num_episodes must be at least 1");
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  const auto n = static_cast<std::size_t>(options.num_episodes);
  std::vector<EpisodeRecord> records(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto seed = episode_seed(options.base_seed, i);
      try {
        auto controller = policy.make(config);
        records[i] = run_episode(config, *controller, seed);
      } catch (const std::exception& e) {
        records[i].scenario = config.name;
        records[i].seed = seed;
        records[i].num_stages = config.num_stages();
        records[i].num_periods = config.num_periods;
        records[i].valid = false;
        records[i].error = e.what();
      }
    }
  };

  int threads = options.parallelism > 0 ? options.parallelism : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.num_episodes);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  ExperimentResult result;
  auto& summary = result.summary;
  summary.scenario = config.name;
  summary.policy = policy.id;
  summary.num_episodes = options.num_episodes;
  summary.base_seed = options.base_seed;
  for (std::size_t i = 0; i < n; ++i) {
    if (records[i].valid) {
      summary.rewards.push_back(records[i].episode_reward);
    } else {
      summary.partial = true;
      summary.errors.push_back("episode " + std::to_string(i) + ": " + records[i].error);
    }
  }
  std::tie(summary.mean_reward, summary.std_reward) = mean_and_std(summary.rewards);
  summary.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.keep_records) result.records = std::move(records);
  return result;
}

bool BenchmarkTable::complete() const {
  for (const auto& row : cells) {
    for (const auto& cell : row) {
      if (cell.partial) return false;
    }
  }
  return true;
}

std::string BenchmarkTable::to_text() const {
  std::size_t name_width = 6;
  for (const auto& p : policies) name_width = std::max(name_width, p.size());
  constexpr int kCell = 20;
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Policy";
  for (const auto& s : scenarios) out << std::setw(kCell) << s;
  out << "\n";
  for (std::size_t p = 0; p < policies.size(); ++p) {
    out << std::setw(static_cast<int>(name_width) + 2) << policies[p];
    for (const auto& cell : cells[p]) {
      out << std::setw(kCell) << (cell.partial ? "ERROR" : format_mean_std(cell.mean_reward, cell.std_reward));
    }
    out << "\n";
  }
  return out.str();
}

std::string BenchmarkTable::to_csv() const {
  std::ostringstream out;
  out << "policy,scenario,episodes,mean_reward,std_reward,partial\n";
  char buf[64];
  for (std::size_t p = 0; p < policies.size(); ++p) {
    for (const auto& cell : cells[p]) {
      out << cell.policy << ',' << cell.scenario << ',' << cell.num_episodes << ',';
      std::snprintf(buf, sizeof buf, "%.4f,%.4f", cell.mean_reward, cell.std_reward);
      out << buf << ',' << (cell.partial ? "true" : "false") << "\n";
    }
  }
  return out.str();
}

BenchmarkTable benchmark_table(const std::vector<ScenarioConfig>& scenarios, const std::vector<PolicySpec>& policies,
                               const RunOptions& options) {
  BenchmarkTable table;
  for (const auto& s : scenarios) table.scenarios.push_back(s.name);
  for (const auto& policy : policies) {
    table.policies.push_back(policy.id);
    auto& row = table.cells.emplace_back();
    for (const auto& scenario : scenarios) {
      try {
        row.push_back(run_experiment(scenario, policy, options).summary);
      } catch (const std::exception& e) {
        RunSummary failed;
        failed.scenario = scenario.name;
        failed.policy = policy.id;
        failed.num_episodes = options.num_episodes;
        failed.base_seed = options.base_seed;
        failed.partial = true;
        failed.errors.push_back(e.what());
        row.push_back(std::move(failed));
      }
    }
  }
  return table;
}

}  // namespace echelon
