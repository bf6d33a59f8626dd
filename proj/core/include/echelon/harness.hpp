#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "echelon/agent.hpp"
#include "echelon/environment.hpp"
#include "echelon/policy.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

struct StageRow {
  Units order = 0;      // O_{m,t}
  Units fulfilled = 0;  // R_{m,t}
  Units sales = 0;
  Units inventory = 0;  // end of period
  Units backlog = 0;
  Money profit = 0;

  friend bool operator==(const StageRow&, const StageRow&) = default;
};

struct PeriodRow {
  Period period = 0;
  Units demand = 0;
  std::vector<StageRow> stages;
  Money reward = 0;

  friend bool operator==(const PeriodRow&, const PeriodRow&) = default;
};

struct EpisodeRecord {
  std::string scenario;
  std::uint64_t seed = 0;
  int num_stages = 0;
  int num_periods = 0;
  std::vector<Units> initial_inventory;
  std::vector<PeriodRow> periods;
  Money episode_reward = 0;
  bool valid = true;
  std::string error;
  int fallbacks = 0;
  std::vector<TranscriptEntry> transcript;
};

/// Sum of all per-stage profits. Throws InputError unless every period 1..T is present.
Money episode_reward(const EpisodeRecord& record);

/// Produces one action vector per period for the whole chain.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void reset(const ScenarioConfig& config, std::uint64_t episode_seed) = 0;
  virtual ActionVector act(const std::vector<Observation>& observations, Period period) = 0;
  virtual std::vector<TranscriptEntry> take_transcript() { return {}; }
  virtual int fallbacks() const { return 0; }
};

/// Independent per-stage policies, all deciding from the same pre-step state.
class PolicyController final : public Controller {
 public:
  explicit PolicyController(std::vector<std::unique_ptr<Policy>> policies);

  void reset(const ScenarioConfig& config, std::uint64_t episode_seed) override;
  ActionVector act(const std::vector<Observation>& observations, Period period) override;

 private:
  std::vector<std::unique_ptr<Policy>> policies_;
  const ScenarioConfig* config_ = nullptr;
};

/// LLM stage agents queried sequentially within each round.
class AgentController final : public Controller {
 public:
  AgentController(std::shared_ptr<const ChatClient> client, AgentConfig config);

  void reset(const ScenarioConfig& config, std::uint64_t episode_seed) override;
  ActionVector act(const std::vector<Observation>& observations, Period period) override;
  std::vector<TranscriptEntry> take_transcript() override;
  int fallbacks() const override { return fallbacks_; }

  const std::vector<ChatSession>& sessions() const { return sessions_; }

 private:
  std::shared_ptr<const ChatClient> client_;
  AgentConfig config_;
  const ScenarioConfig* scenario_ = nullptr;
  std::vector<ChatSession> sessions_;
  std::vector<TranscriptEntry> transcript_;
  int fallbacks_ = 0;
};

/// Named factory producing a fresh controller per episode.
struct PolicySpec {
  std::string id;
  std::function<std::unique_ptr<Controller>(const ScenarioConfig&)> make;
};

/// Same heuristic preset at every stage. Throws LookupError for unknown names.
PolicySpec preset_spec(const std::string& name);
PolicySpec scripted_spec(std::string id, std::vector<std::vector<Units>> orders_per_stage);
PolicySpec random_spec(Units max_order);
PolicySpec llm_spec(std::string id, std::shared_ptr<const ChatClient> client, AgentConfig config);

EpisodeRecord run_episode(const ScenarioConfig& config, Controller& controller, std::uint64_t seed);

struct RunSummary {
  std::string scenario;
  std::string policy;
  int num_episodes = 0;
  std::uint64_t base_seed = 0;
  Money mean_reward = 0;
  /// Population standard deviation over episodes.
  Money std_reward = 0;
  std::vector<Money> rewards;
  double wall_clock_seconds = 0;
  bool partial = false;
  std::vector<std::string> errors;
};

struct RunOptions {
  int num_episodes = 100;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  /// Keep every EpisodeRecord in the result.
  bool keep_records = false;
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<EpisodeRecord> records;
};

/// Episode i runs with episode_seed(base_seed, i). Output does not depend on
/// parallelism.
ExperimentResult run_experiment(const ScenarioConfig& config, const PolicySpec& policy, const RunOptions& options);

/// Population mean and std of a sample.
std::pair<double, double> mean_and_std(const std::vector<double>& values);

/// "-296.00 (0.00)"
std::string format_mean_std(double mean, double std);

struct BenchmarkTable {
  std::vector<std::string> scenarios;
  std::vector<std::string> policies;
  /// cells[policy][scenario]
  std::vector<std::vector<RunSummary>> cells;

  bool complete() const;
  std::string to_text() const;
  std::string to_csv() const;
};

BenchmarkTable benchmark_table(const std::vector<ScenarioConfig>& scenarios, const std::vector<PolicySpec>& policies,
                               const RunOptions& options);

}  // namespace echelon
