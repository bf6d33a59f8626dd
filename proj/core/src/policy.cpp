#include "echelon/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "echelon/errors.hpp"

namespace echelon {

double desired_inventory(const DesiredInventoryRule& rule, const Observation& obs) {
  if (const auto* frac = std::get_if<CapacityFraction>(&rule))
    return frac->kappa * static_cast<double>(obs.params.capacity);

  const auto& sales = std::get<SalesBased>(rule);
  double reference = 0;
  if (!obs.recent_sales.empty()) {
    if (sales.reference == SalesReference::kLast) {
      reference = static_cast<double>(obs.recent_sales.back());
    } else {
      // Zero-padded entries count towards the denominator.
      const Units total = std::accumulate(obs.recent_sales.begin(), obs.recent_sales.end(), Units{0});
      reference = static_cast<double>(total) / static_cast<double>(obs.recent_sales.size());
    }
  }
  const int horizon = obs.params.lead_time + (sales.lead_plus_one ? 1 : 0);
  double target = sales.scale * reference * horizon;
  if (sales.plus_backlog) target += static_cast<double>(obs.backlog);
  return target;
}

Units heuristic_order(const DesiredInventoryRule& rule, const Observation& obs) {
  // 1e-9 absorbs representation error in products such as 1.2 * 2.5.
  const auto target = static_cast<Units>(std::floor(desired_inventory(rule, obs) + 1e-9));
  const Units in_flight =
      std::accumulate(obs.arriving_deliveries.begin(), obs.arriving_deliveries.end(), Units{0});
  const Units raw = target - obs.inventory - obs.upstream_backlog - in_flight;
  return std::clamp<Units>(raw, 0, obs.params.capacity);
}

Units HeuristicPolicy::decide(const Observation& obs, std::optional<Units>) { return heuristic_order(rule_, obs); }

void ScriptedPolicy::reset(const StageContext&) { next_ = 0; }

Units ScriptedPolicy::decide(const Observation&, std::optional<Units>) {
  if (next_ >= orders_.size()) return 0;
  return orders_[next_++];
}

void RandomPolicy::reset(const StageContext& context) {
  rng_ = make_stream(context.episode_seed, "policy/" + std::to_string(context.stage_index));
}

Units RandomPolicy::decide(const Observation&, std::optional<Units>) {
  return std::uniform_int_distribution<Units>(0, max_order_)(rng_);
}

const std::vector<PresetInfo>& heuristic_presets() {
  static const std::vector<PresetInfo> presets{
      {"base-stock-0.8", "0.8 c_m", CapacityFraction{0.8}},
      {"base-stock-0.9", "0.9 c_m", CapacityFraction{0.9}},
      {"base-stock", "c_m", CapacityFraction{1.0}},
      {"tracking-last", "S_{m,t-1} L_m + B_{m,t-1}", SalesBased{SalesReference::kLast, false, 1.0, true}},
      {"tracking-last-lead1", "S_{m,t-1} (L_m + 1) + B_{m,t-1}", SalesBased{SalesReference::kLast, true, 1.0, true}},
      {"tracking-demand", "mean(S) L_m + B_{m,t-1}", SalesBased{SalesReference::kMean, false, 1.0, true}},
      {"tracking-mean-lead1", "mean(S) (L_m + 1) + B_{m,t-1}", SalesBased{SalesReference::kMean, true, 1.0, true}},
      {"tracking-mean-1.2", "1.2 mean(S) L_m + B_{m,t-1}", SalesBased{SalesReference::kMean, false, 1.2, true}},
  };
  return presets;
}

std::vector<std::string> heuristic_preset_names() {
  std::vector<std::string> names;
  for (const auto& p : heuristic_presets()) names.push_back(p.name);
  return names;
}

const PresetInfo& find_preset(std::string_view name) {
  if (name == "base-stock-1.0") name = "base-stock";
  for (const auto& p : heuristic_presets()) {
    if (p.name == name) return p;
  }
  throw LookupError("unknown policy preset '" + std::string(name) + "'");
}

std::unique_ptr<Policy> make_preset_policy(std::string_view name) {
  return std::make_unique<HeuristicPolicy>(find_preset(name).rule);
}

}  // namespace echelon
