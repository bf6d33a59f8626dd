#include <gtest/gtest.h>

#include <random>

#include "echelon/errors.hpp"
#include "echelon/harness.hpp"
#include "echelon/policy.hpp"

namespace echelon {
namespace {

Observation retailer_obs(Units inventory, std::vector<Units> sales, std::vector<Units> deliveries) {
  Observation obs;
  obs.stage_index = 0;
  obs.params = preset_scenario("constant").stages[0];
  obs.inventory = inventory;
  obs.recent_sales = std::move(sales);
  obs.arriving_deliveries = std::move(deliveries);
  return obs;
}

TEST(DesiredInventory, CapacityFraction) {
  const auto obs = retailer_obs(12, {0, 0}, {0, 0});
  EXPECT_DOUBLE_EQ(desired_inventory(CapacityFraction{1.0}, obs), 20.0);
  EXPECT_DOUBLE_EQ(desired_inventory(CapacityFraction{0.8}, obs), 16.0);
  EXPECT_DOUBLE_EQ(desired_inventory(CapacityFraction{0.0}, obs), 0.0);
}

TEST(DesiredInventory, MeanSalesTimesLeadPlusBacklog) {
  auto obs = retailer_obs(12, {0, 4}, {0, 0});
  const SalesBased tracking{SalesReference::kMean, false, 1.0, true};
  EXPECT_DOUBLE_EQ(desired_inventory(tracking, obs), 4.0);
  obs.backlog = 3;
  EXPECT_DOUBLE_EQ(desired_inventory(tracking, obs), 7.0);
  // Own backlog counts, upstream backlog does not.
  obs.upstream_backlog = 50;
  EXPECT_DOUBLE_EQ(desired_inventory(tracking, obs), 7.0);
}

TEST(DesiredInventory, SalesVariants) {
  const auto obs = retailer_obs(0, {2, 5}, {0, 0});
  EXPECT_DOUBLE_EQ(desired_inventory(SalesBased{SalesReference::kLast, false, 1.0, true}, obs), 10.0);
  EXPECT_DOUBLE_EQ(desired_inventory(SalesBased{SalesReference::kLast, true, 1.0, true}, obs), 15.0);
  EXPECT_DOUBLE_EQ(desired_inventory(SalesBased{SalesReference::kMean, true, 1.0, true}, obs), 10.5);
  EXPECT_DOUBLE_EQ(desired_inventory(SalesBased{SalesReference::kMean, false, 1.2, true}, obs), 8.4);
  EXPECT_DOUBLE_EQ(desired_inventory(SalesBased{SalesReference::kMean, false, 1.0, false}, obs), 7.0);
}

TEST(HeuristicOrder, OrdersUpToTarget) {
  EXPECT_EQ(heuristic_order(CapacityFraction{1.0}, retailer_obs(12, {0, 0}, {0, 0})), 8);
}

TEST(HeuristicOrder, SubtractsInFlightDeliveries) {
  EXPECT_EQ(heuristic_order(CapacityFraction{1.0}, retailer_obs(12, {0, 0}, {8, 0})), 0);
  EXPECT_EQ(heuristic_order(CapacityFraction{1.0}, retailer_obs(12, {0, 0}, {3, 2})), 3);
}

TEST(HeuristicOrder, SubtractsUpstreamBacklog) {
  auto obs = retailer_obs(12, {0, 0}, {0, 0});
  obs.upstream_backlog = 5;
  EXPECT_EQ(heuristic_order(CapacityFraction{1.0}, obs), 3);
}

TEST(HeuristicOrder, ClampsToZeroAndCapacity) {
  EXPECT_EQ(heuristic_order(CapacityFraction{0.5}, retailer_obs(15, {0, 0}, {0, 0})), 0);
  EXPECT_EQ(heuristic_order(CapacityFraction{3.0}, retailer_obs(0, {0, 0}, {0, 0})), 20);
}

TEST(HeuristicOrder, FloorsFractionalTargets) {
  // 1.2 * mean(2, 5) * 2 = 8.4 -> 8
  EXPECT_EQ(heuristic_order(SalesBased{SalesReference::kMean, false, 1.2, true}, retailer_obs(0, {2, 5}, {0, 0})), 8);
  // 0.9 * 20 must not fall to 17 through representation error.
  EXPECT_EQ(heuristic_order(CapacityFraction{0.9}, retailer_obs(0, {0, 0}, {0, 0})), 18);
}

TEST(HeuristicOrder, PropertyBoundedAndMonotoneInInventory) {
  std::mt19937_64 rng(7);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 2000; ++trial) {
    const auto& preset = heuristic_presets()[static_cast<std::size_t>(pick(0, 7))];
    Observation obs;
    obs.params.capacity = pick(0, 30);
    obs.params.lead_time = pick(1, 4);
    const int lmax = pick(obs.params.lead_time, 5);
    for (int i = 0; i < lmax; ++i) obs.recent_sales.push_back(pick(0, 10));
    for (int i = 0; i < obs.params.lead_time; ++i) obs.arriving_deliveries.push_back(pick(0, 10));
    obs.backlog = pick(0, 10);
    obs.upstream_backlog = pick(0, 10);
    obs.inventory = pick(0, 40);

    const Units order = heuristic_order(preset.rule, obs);
    ASSERT_GE(order, 0);
    ASSERT_LE(order, obs.params.capacity);
    Observation richer = obs;
    richer.inventory += pick(1, 10);
    ASSERT_LE(heuristic_order(preset.rule, richer), order) << preset.name;
  }
}

TEST(Presets, RegistryLookup) {
  EXPECT_EQ(heuristic_presets().size(), 8u);
  const auto& base = find_preset("base-stock");
  ASSERT_TRUE(std::holds_alternative<CapacityFraction>(base.rule));
  EXPECT_EQ(std::get<CapacityFraction>(base.rule).kappa, 1.0);
  EXPECT_EQ(std::get<CapacityFraction>(find_preset("base-stock-0.8").rule).kappa, 0.8);
  const auto& tracking = std::get<SalesBased>(find_preset("tracking-demand").rule);
  EXPECT_EQ(tracking.reference, SalesReference::kMean);
  EXPECT_FALSE(tracking.lead_plus_one);
  EXPECT_EQ(tracking.scale, 1.0);
  EXPECT_TRUE(tracking.plus_backlog);
  EXPECT_THROW(find_preset("s-S"), LookupError);
  EXPECT_THROW(make_preset_policy("nope"), LookupError);
  EXPECT_NE(make_preset_policy("tracking-mean-1.2"), nullptr);
}

TEST(Presets, ConstantScenarioRewardsAreDeterministic) {
  const auto config = preset_scenario("constant");
  const std::vector<double> expected{-208, -252, -296, -364, -120, -360, -252, -361};
  const auto names = heuristic_preset_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto result = run_experiment(config, preset_spec(names[i]), RunOptions{.num_episodes = 3});
    EXPECT_EQ(result.summary.mean_reward, expected[i]) << names[i];
    EXPECT_EQ(result.summary.std_reward, 0.0) << names[i];
  }
}

TEST(Presets, HeuristicsIgnoreDownstreamOrder) {
  HeuristicPolicy policy(find_preset("base-stock").rule);
  const auto obs = retailer_obs(12, {0, 0}, {0, 0});
  EXPECT_EQ(policy.decide(obs, std::nullopt), policy.decide(obs, Units{17}));
}

TEST(ScriptedPolicy, ReplayReproducesRecordBitExactly) {
  const auto config = preset_scenario("variable");
  auto base = preset_spec("tracking-demand").make(config);
  const auto original = run_episode(config, *base, 31337);

  std::vector<std::vector<Units>> orders(4);
  for (const auto& row : original.periods) {
    for (int m = 0; m < 4; ++m) orders[m].push_back(row.stages[m].order);
  }
  auto replay = scripted_spec("replay", orders).make(config);
  const auto replayed = run_episode(config, *replay, 31337);
  EXPECT_EQ(replayed.periods, original.periods);
  EXPECT_EQ(replayed.episode_reward, original.episode_reward);
}

TEST(ScriptedPolicy, ZeroPastEndAndResetRewinds) {
  ScriptedPolicy policy({3, 1});
  const Observation obs;
  EXPECT_EQ(policy.decide(obs, std::nullopt), 3);
  EXPECT_EQ(policy.decide(obs, std::nullopt), 1);
  EXPECT_EQ(policy.decide(obs, std::nullopt), 0);
  policy.reset({});
  EXPECT_EQ(policy.decide(obs, std::nullopt), 3);
}

}  // namespace
}  // namespace echelon
