#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace echelon {

using Units = std::int64_t;
using Money = double;
using Period = int;

struct StageParams {
  Units capacity = 0;
  Money sale_price = 0;
  Money order_cost = 0;
  Money backlog_cost = 0;
  Money holding_cost = 0;
  int lead_time = 1;
  Units init_inventory = 0;

  friend bool operator==(const StageParams&, const StageParams&) = default;
};

struct ConstantDemand {
  Units value = 0;
  friend bool operator==(const ConstantDemand&, const ConstantDemand&) = default;
};

/// Discrete uniform on [lo, hi], both ends inclusive.
struct UniformDemand {
  Units lo = 0;
  Units hi = 0;
  friend bool operator==(const UniformDemand&, const UniformDemand&) = default;
};

struct DemandSegment {
  Period first = 1;
  Period last = 1;
  UniformDemand dist;
  friend bool operator==(const DemandSegment&, const DemandSegment&) = default;
};

struct PiecewiseDemand {
  std::vector<DemandSegment> segments;
  friend bool operator==(const PiecewiseDemand&, const PiecewiseDemand&) = default;
};

/// Normal draw clamped at zero, then rounded half-up to an integer.
struct TruncNormalDemand {
  double mean = 0;
  double stddev = 1;
  friend bool operator==(const TruncNormalDemand&, const TruncNormalDemand&) = default;
};

using DemandModel = std::variant<ConstantDemand, UniformDemand, PiecewiseDemand, TruncNormalDemand>;

struct ScenarioConfig {
  std::string name;
  int num_periods = 0;
  std::vector<StageParams> stages;  // stage 0 is the retailer
  DemandModel demand = ConstantDemand{};

  int num_stages() const { return static_cast<int>(stages.size()); }
  int max_lead_time() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const ScenarioConfig& config);

/// Built-in presets: constant, variable, larger, seasonal, normal.
ScenarioConfig preset_scenario(std::string_view name);
const std::vector<std::string>& preset_scenario_names();

ScenarioConfig scenario_from_json(std::string_view text);
std::string scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// Preset name if it is one, otherwise a path to a scenario file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

}  // namespace echelon
