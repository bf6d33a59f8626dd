#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "echelon/rng.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

using ActionVector = std::vector<Units>;

struct StageState {
  Units inventory = 0;  // I_{m,t-1}
  Units backlog = 0;    // B_{m,t-1}
  /// Last L_max sales, oldest first.
  std::vector<Units> sales_history;
  /// pipeline[d-1] holds the order fulfilled d periods ago; length L_m.
  std::vector<Units> pipeline;
  Money cumulative_profit = 0;

  friend bool operator==(const StageState&, const StageState&) = default;
};

struct EnvState {
  Period period = 1;  // the period about to be played
  std::vector<StageState> stages;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

/// What a stage agent sees at the start of a period.
struct Observation {
  int stage_index = 0;
  StageParams params;
  Units inventory = 0;
  Units backlog = 0;
  Units upstream_backlog = 0;
  std::vector<Units> recent_sales;         // L_max entries, oldest first, zero padded
  std::vector<Units> arriving_deliveries;  // L_m entries, arriving this period first

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StageOutcome {
  Units fulfilled = 0;  // R_{m,t}
  Units sales = 0;      // S_{m,t}
  Units inventory = 0;  // I_{m,t}
  Units backlog = 0;    // B_{m,t}
  Money profit = 0;     // P_{m,t}

  friend bool operator==(const StageOutcome&, const StageOutcome&) = default;
};

struct StepResult {
  Period period = 0;
  Units demand = 0;
  std::vector<StageOutcome> stages;
  Money total_reward_delta = 0;

  friend bool operator==(const StepResult&, const StepResult&) = default;
};

EnvState initial_state(const ScenarioConfig& config);

Observation observe(const ScenarioConfig& config, const EnvState& state, int stage);

/// Plays one period with a known demand. Throws InputError on a negative or
/// missing order and LifecycleError after the last period.
StepResult advance(const ScenarioConfig& config, EnvState& state, std::span<const Units> orders,
                   Units demand);

/// Seeded simulator owning its config, state and demand stream.
class Environment {
 public:
  explicit Environment(ScenarioConfig config);

  const EnvState& reset(std::uint64_t seed);
  Observation observe(int stage) const;
  std::vector<Observation> observe_all() const;
  StepResult step(std::span<const Units> orders);

  bool done() const { return state_.period > config_.num_periods; }
  const EnvState& state() const { return state_; }
  const ScenarioConfig& config() const { return config_; }

 private:
  ScenarioConfig config_;
  EnvState state_;
  Engine demand_rng_;
};

}  // namespace echelon
