#include "echelon/ablation.hpp"

#include <cmath>

#include "echelon/errors.hpp"

namespace echelon {

namespace {

PromptFlags flags(bool demand, bool downstream, bool strategy, bool cot, bool history) {
  PromptFlags f;
  f.include_demand = demand;
  f.include_downstream = downstream;
  f.include_strategy = strategy;
  f.chain_of_thought = cot;
  f.keep_history = history;
  return f;
}

}  // namespace

const std::vector<AblationRow>& ablation_matrix() {
  //                                                   demand downstream strategy cot   history
  static const std::vector<AblationRow> rows{
      {"default", flags(true, true, false, true, true)},
      {"strategy", flags(true, true, true, true, true)},
      {"no-demand", flags(false, true, true, true, true)},
      {"no-downstream", flags(true, false, true, true, true)},
      {"no-demand-no-downstream", flags(false, false, true, true, true)},
      {"no-history", flags(true, true, false, true, false)},
      {"no-cot", flags(true, true, true, false, true)},
      {"strategy-no-history", flags(true, true, true, true, false)},
  };
  return rows;
}

const AblationRow& find_ablation_row(std::string_view id) {
  for (const auto& row : ablation_matrix()) {
    if (row.id == id) return row;
  }
  throw LookupError("unknown ablation row '" + std::string(id) + "'");
}

double delta_percent(double reward, double base) {
  if (base == 0) throw InputError("delta percent undefined for a zero base reward");
  return (reward - base) / std::abs(base) * 100.0;
}

}  // namespace echelon
