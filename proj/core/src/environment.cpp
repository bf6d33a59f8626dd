#include "echelon/environment.hpp"

#include <algorithm>

#include "echelon/demand.hpp"
#include "echelon/errors.hpp"

namespace echelon {

EnvState initial_state(const ScenarioConfig& config) {
  validate(config);
  EnvState state;
  state.period = 1;
  const auto history = static_cast<std::size_t>(config.max_lead_time());
  for (const auto& p : config.stages) {
    StageState s;
    s.inventory = p.init_inventory;
    s.sales_history.assign(history, 0);
    s.pipeline.assign(static_cast<std::size_t>(p.lead_time), 0);
    state.stages.push_back(std::move(s));
  }
  return state;
}

Observation observe(const ScenarioConfig& config, const EnvState& state, int stage) {
  if (stage < 0 || stage >= config.num_stages())
    throw InputError("stage " + std::to_string(stage) + " out of range");
  const auto& s = state.stages[stage];
  Observation obs;
  obs.stage_index = stage;
  obs.params = config.stages[stage];
  obs.inventory = s.inventory;
  obs.backlog = s.backlog;
  obs.upstream_backlog = stage + 1 < config.num_stages() ? state.stages[stage + 1].backlog : 0;
  obs.recent_sales = s.sales_history;
  obs.arriving_deliveries.assign(s.pipeline.rbegin(), s.pipeline.rend());
  return obs;
}

StepResult advance(const ScenarioConfig& config, EnvState& state, std::span<const Units> orders, Units demand) {
  const int num_stages = config.num_stages();
  if (state.period > config.num_periods)
    throw LifecycleError("episode already finished after period " + std::to_string(config.num_periods));
  if (static_cast<int>(orders.size()) != num_stages)
    throw InputError("expected " + std::to_string(num_stages) + " orders, got " + std::to_string(orders.size()));
  for (int m = 0; m < num_stages; ++m) {
    if (orders[m] < 0) throw InputError("negative order at stage " + std::to_string(m));
  }
  if (demand < 0) throw InputError("negative demand");

  auto& st = state.stages;
  std::vector<Units> arriving(num_stages);
  for (int m = 0; m < num_stages; ++m) arriving[m] = st[m].pipeline.back();

  StepResult result;
  result.period = state.period;
  result.demand = demand;
  result.stages.resize(num_stages);
  auto& out = result.stages;

  // Fulfilled orders: bounded by what upstream owes, can make, and has on hand.
  for (int m = 0; m + 1 < num_stages; ++m) {
    const auto& up = config.stages[m + 1];
    out[m].fulfilled =
        std::min({st[m + 1].backlog + orders[m], up.capacity, st[m + 1].inventory + arriving[m + 1]});
  }
  out[num_stages - 1].fulfilled = orders[num_stages - 1];

  for (int m = 1; m < num_stages; ++m) out[m].sales = out[m - 1].fulfilled;
  out[0].sales = std::min({st[0].backlog + demand, config.stages[0].capacity, st[0].inventory + arriving[0]});

  for (int m = 0; m < num_stages; ++m) {
    out[m].inventory = st[m].inventory + arriving[m] - out[m].sales;
    const Units incoming = m == 0 ? demand : orders[m - 1];
    out[m].backlog = st[m].backlog + incoming - out[m].sales;
    if (out[m].inventory < 0 || out[m].backlog < 0)
      throw InvariantError("negative inventory or backlog at stage " + std::to_string(m));

    const auto& p = config.stages[m];
    out[m].profit = p.sale_price * static_cast<Money>(out[m].sales) -
                    p.order_cost * static_cast<Money>(out[m].fulfilled) -
                    p.backlog_cost * static_cast<Money>(out[m].backlog) -
                    p.holding_cost * static_cast<Money>(out[m].inventory);
    result.total_reward_delta += out[m].profit;
  }

  for (int m = 0; m < num_stages; ++m) {
    auto& s = st[m];
    s.inventory = out[m].inventory;
    s.backlog = out[m].backlog;
    s.cumulative_profit += out[m].profit;
    std::rotate(s.pipeline.rbegin(), s.pipeline.rbegin() + 1, s.pipeline.rend());
    s.pipeline.front() = out[m].fulfilled;
    if (!s.sales_history.empty()) {
      std::rotate(s.sales_history.begin(), s.sales_history.begin() + 1, s.sales_history.end());
      s.sales_history.back() = out[m].sales;
    }
  }
  ++state.period;
  return result;
}

Environment::Environment(ScenarioConfig config) : config_(std::move(config)) {
  validate(config_);
  reset(0);
}

const EnvState& Environment::reset(std::uint64_t seed) {
  state_ = initial_state(config_);
  demand_rng_ = make_stream(seed, "demand");
  return state_;
}

Observation Environment::observe(int stage) const { return echelon::observe(config_, state_, stage); }

std::vector<Observation> Environment::observe_all() const {
  std::vector<Observation> all;
  all.reserve(config_.stages.size());
  for (int m = 0; m < config_.num_stages(); ++m) all.push_back(observe(m));
  return all;
}

StepResult Environment::step(std::span<const Units> orders) {
  if (done()) throw LifecycleError("step called after the final period");
  // Validate before drawing so a rejected step leaves the demand stream untouched.
  if (static_cast<int>(orders.size()) != config_.num_stages()) throw InputError("order vector has wrong length");
  for (Units o : orders) {
    if (o < 0) throw InputError("negative order");
  }
  const Units demand = sample_demand(config_.demand, state_.period, demand_rng_);
  return advance(config_, state_, orders, demand);
}

}  // namespace echelon
