#include "echelon/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "echelon/errors.hpp"

namespace echelon {

using nlohmann::json;

int ScenarioConfig::max_lead_time() const {
  int result = 0;
  for (const auto& s : stages) result = std::max(result, s.lead_time);
  return result;
}

namespace {

void validate_uniform(const UniformDemand& u, const std::string& where) {
  if (u.lo < 0 || u.hi < u.lo) throw ConfigError(where + ": uniform demand needs 0 <= lo <= hi");
}

void validate_demand(const DemandModel& model, int num_periods) {
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantDemand>) {
          if (m.value < 0) throw ConfigError("constant demand must be non-negative");
        } else if constexpr (std::is_same_v<M, UniformDemand>) {
          validate_uniform(m, "demand");
        } else if constexpr (std::is_same_v<M, PiecewiseDemand>) {
          if (m.segments.empty()) throw ConfigError("piecewise demand has no segments");
          Period expected = 1;
          for (const auto& seg : m.segments) {
            if (seg.first != expected || seg.last < seg.first)
              throw ConfigError("piecewise demand segments must be contiguous starting at period 1");
            validate_uniform(seg.dist, "piecewise segment");
            expected = seg.last + 1;
          }
          if (expected != num_periods + 1)
            throw ConfigError("piecewise demand must cover periods 1.." + std::to_string(num_periods));
        } else {
          if (!(m.stddev >= 0)) throw ConfigError("normal demand stddev must be non-negative");
        }
      },
      model);
}

}  // namespace

void validate(const ScenarioConfig& config) {
  if (config.num_stages() < 2) throw ConfigError("scenario needs at least 2 stages");
  if (config.num_periods < 1) throw ConfigError("scenario needs at least 1 period");
  for (int m = 0; m < config.num_stages(); ++m) {
    const auto& s = config.stages[m];
    const std::string where = "stage " + std::to_string(m) + ": ";
    if (s.capacity < 0) throw ConfigError(where + "capacity must be non-negative");
    if (s.lead_time < 1) throw ConfigError(where + "lead time must be at least 1");
    if (s.init_inventory < 0) throw ConfigError(where + "initial inventory must be non-negative");
    if (s.sale_price < 0 || s.order_cost < 0 || s.backlog_cost < 0 || s.holding_cost < 0)
      throw ConfigError(where + "prices and costs must be non-negative");
  }
  validate_demand(config.demand, config.num_periods);
}

namespace {

ScenarioConfig four_stage(std::string name, Units inventory, int lead, Units capacity, Money price, Money cost) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.num_periods = 12;
  for (int m = 0; m < 4; ++m) {
    c.stages.push_back(StageParams{.capacity = capacity,
                                   .sale_price = price,
                                   .order_cost = cost,
                                   .backlog_cost = 1,
                                   .holding_cost = 1,
                                   .lead_time = lead,
                                   .init_inventory = inventory});
  }
  return c;
}

}  // namespace

const std::vector<std::string>& preset_scenario_names() {
  static const std::vector<std::string> names{"constant", "variable", "larger", "seasonal", "normal"};
  return names;
}

ScenarioConfig preset_scenario(std::string_view name) {
  if (name == "constant") {
    auto c = four_stage("constant", 12, 2, 20, 0, 0);
    c.demand = ConstantDemand{4};
    return c;
  }
  if (name == "variable") {
    auto c = four_stage("variable", 12, 2, 20, 0, 0);
    c.demand = UniformDemand{0, 4};
    return c;
  }
  if (name == "larger") {
    auto c = four_stage("larger", 12, 2, 20, 5, 5);
    c.demand = UniformDemand{0, 8};
    return c;
  }
  if (name == "seasonal") {
    auto c = four_stage("seasonal", 12, 2, 20, 5, 5);
    c.demand = PiecewiseDemand{{DemandSegment{1, 4, {0, 4}}, DemandSegment{5, 12, {5, 8}}}};
    return c;
  }
  if (name == "normal") {
    ScenarioConfig c;
    c.name = "normal";
    c.num_periods = 12;
    const Units inventory[] = {12, 14, 16, 18};
    const Units capacity[] = {20, 22, 24, 26};
    const Money price[] = {9, 8, 7, 6};
    const Money cost[] = {8, 7, 6, 5};
    for (int m = 0; m < 4; ++m) {
      c.stages.push_back(StageParams{.capacity = capacity[m],
                                     .sale_price = price[m],
                                     .order_cost = cost[m],
                                     .backlog_cost = 1,
                                     .holding_cost = 1,
                                     .lead_time = m + 1,
                                     .init_inventory = inventory[m]});
    }
    c.demand = TruncNormalDemand{4, 2};
    return c;
  }
  throw LookupError("unknown scenario '" + std::string(name) + "'");
}

// Scenario files mirror the parameter table: one array per stage parameter,
// indexed from the retailer upwards.
//
// {
//   "name": "constant", "num_stages": 4, "num_periods": 12,
//   "initial_inventories": [12, 12, 12, 12], "lead_times": [2, 2, 2, 2],
//   "demand": {"type": "constant", "value": 4},
//   "capacities": [20, 20, 20, 20], "sale_prices": [0, 0, 0, 0],
//   "order_costs": [0, 0, 0, 0], "backlog_costs": [1, 1, 1, 1],
//   "holding_costs": [1, 1, 1, 1]
// }

namespace {

json demand_to_json(const DemandModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantDemand>) {
          return {{"type", "constant"}, {"value", m.value}};
        } else if constexpr (std::is_same_v<M, UniformDemand>) {
          return {{"type", "uniform"}, {"lo", m.lo}, {"hi", m.hi}};
        } else if constexpr (std::is_same_v<M, PiecewiseDemand>) {
          json segs = json::array();
          for (const auto& s : m.segments)
            segs.push_back({{"first", s.first}, {"last", s.last}, {"lo", s.dist.lo}, {"hi", s.dist.hi}});
          return {{"type", "piecewise"}, {"segments", segs}};
        } else {
          return {{"type", "normal"}, {"mean", m.mean}, {"stddev", m.stddev}};
        }
      },
      model);
}

DemandModel demand_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") return ConstantDemand{j.at("value").get<Units>()};
  if (type == "uniform") return UniformDemand{j.at("lo").get<Units>(), j.at("hi").get<Units>()};
  if (type == "piecewise") {
    PiecewiseDemand p;
    for (const auto& s : j.at("segments")) {
      p.segments.push_back(DemandSegment{s.at("first").get<Period>(), s.at("last").get<Period>(),
                                         UniformDemand{s.at("lo").get<Units>(), s.at("hi").get<Units>()}});
    }
    return p;
  }
  if (type == "normal") return TruncNormalDemand{j.at("mean").get<double>(), j.at("stddev").get<double>()};
  throw ConfigError("unknown demand type '" + type + "'");
}

template <class T>
std::vector<T> stage_array(const json& j, const char* key, int num_stages) {
  auto values = j.at(key).get<std::vector<T>>();
  if (static_cast<int>(values.size()) != num_stages)
    throw ConfigError(std::string(key) + " must have one entry per stage");
  return values;
}

}  // namespace

ScenarioConfig scenario_from_json(std::string_view text) {
  ScenarioConfig c;
  try {
    const json j = json::parse(text);
    c.name = j.value("name", std::string("custom"));
    const int num_stages = j.at("num_stages").get<int>();
    if (num_stages < 2) throw ConfigError("scenario needs at least 2 stages");
    c.num_periods = j.at("num_periods").get<int>();
    const auto inventory = stage_array<Units>(j, "initial_inventories", num_stages);
    const auto lead = stage_array<int>(j, "lead_times", num_stages);
    const auto capacity = stage_array<Units>(j, "capacities", num_stages);
    const auto price = stage_array<Money>(j, "sale_prices", num_stages);
    const auto cost = stage_array<Money>(j, "order_costs", num_stages);
    const auto backlog = stage_array<Money>(j, "backlog_costs", num_stages);
    const auto holding = stage_array<Money>(j, "holding_costs", num_stages);
    for (int m = 0; m < num_stages; ++m) {
      c.stages.push_back(StageParams{.capacity = capacity[m],
                                     .sale_price = price[m],
                                     .order_cost = cost[m],
                                     .backlog_cost = backlog[m],
                                     .holding_cost = holding[m],
                                     .lead_time = lead[m],
                                     .init_inventory = inventory[m]});
    }
    c.demand = demand_from_json(j.at("demand"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
  validate(c);
  return c;
}

std::string scenario_to_json(const ScenarioConfig& config) {
  json j;
  j["name"] = config.name;
  j["num_stages"] = config.num_stages();
  j["num_periods"] = config.num_periods;
  std::vector<Units> inventory, capacity;
  std::vector<int> lead;
  std::vector<Money> price, cost, backlog, holding;
  for (const auto& s : config.stages) {
    inventory.push_back(s.init_inventory);
    lead.push_back(s.lead_time);
    capacity.push_back(s.capacity);
    price.push_back(s.sale_price);
    cost.push_back(s.order_cost);
    backlog.push_back(s.backlog_cost);
    holding.push_back(s.holding_cost);
  }
  j["initial_inventories"] = inventory;
  j["lead_times"] = lead;
  j["demand"] = demand_to_json(config.demand);
  j["capacities"] = capacity;
  j["sale_prices"] = price;
  j["order_costs"] = cost;
  j["backlog_costs"] = backlog;
  j["holding_costs"] = holding;
  return j.dump(2);
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  const auto& names = preset_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return preset_scenario(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
  throw LookupError("unknown scenario '" + name_or_path + "'");
}

}  // namespace echelon
