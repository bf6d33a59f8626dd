#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "echelon/environment.hpp"
#include "echelon/rng.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

struct StageContext {
  int stage_index = 0;
  const ScenarioConfig* scenario = nullptr;
  std::uint64_t episode_seed = 0;
};

/// Per-stage ordering rule. Instances keep per-episode memory only; reset()
/// is called once at the start of every episode.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual void reset(const StageContext& context) { (void)context; }
  virtual Units decide(const Observation& obs, std::optional<Units> downstream_order) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
};

/// Desired inventory as a fraction of own capacity.
struct CapacityFraction {
  double kappa = 1.0;
};

enum class SalesReference { kLast, kMean };

/// scale * sales_ref * (L_m or L_m + 1) [+ own backlog].
struct SalesBased {
  SalesReference reference = SalesReference::kMean;
  bool lead_plus_one = false;
  double scale = 1.0;
  bool plus_backlog = true;
};

using DesiredInventoryRule = std::variant<CapacityFraction, SalesBased>;

double desired_inventory(const DesiredInventoryRule& rule, const Observation& obs);

/// Order-up-to rule: desired inventory minus inventory, upstream backlog and
/// in-flight deliveries, clamped to [0, c_m]. Fractional targets are floored.
Units heuristic_order(const DesiredInventoryRule& rule, const Observation& obs);

class HeuristicPolicy final : public Policy {
 public:
  explicit HeuristicPolicy(DesiredInventoryRule rule) : rule_(rule) {}

  Units decide(const Observation& obs, std::optional<Units> downstream_order) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<HeuristicPolicy>(*this); }

  const DesiredInventoryRule& rule() const { return rule_; }

 private:
  DesiredInventoryRule rule_;
};

/// Replays a fixed order sequence; period t uses orders[t-1], zero past the end.
class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<Units> orders) : orders_(std::move(orders)) {}

  void reset(const StageContext& context) override;
  Units decide(const Observation& obs, std::optional<Units> downstream_order) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ScriptedPolicy>(*this); }

 private:
  std::vector<Units> orders_;
  std::size_t next_ = 0;
};

/// Uniform order on [0, max_order] from the stage's own "policy/<m>" stream.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(Units max_order) : max_order_(max_order) {}

  void reset(const StageContext& context) override;
  Units decide(const Observation& obs, std::optional<Units> downstream_order) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomPolicy>(*this); }

 private:
  Units max_order_;
  Engine rng_{0};
};

struct PresetInfo {
  std::string name;
  std::string formula;
  DesiredInventoryRule rule;
};

/// The eight heuristic presets in table order.
const std::vector<PresetInfo>& heuristic_presets();
std::vector<std::string> heuristic_preset_names();

/// Throws LookupError for an unknown name.
const PresetInfo& find_preset(std::string_view name);
std::unique_ptr<Policy> make_preset_policy(std::string_view name);

}  // namespace echelon
