#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "echelon/prompt.hpp"

namespace echelon {

struct AblationRow {
  std::string id;
  PromptFlags flags;
};

/// The eight prompt settings of the ablation study, best setting first.
const std::vector<AblationRow>& ablation_matrix();

/// Throws LookupError for an unknown id.
const AblationRow& find_ablation_row(std::string_view id);

/// Relative change versus the base reward, in percent: (reward - base) / |base| * 100.
double delta_percent(double reward, double base);

}  // namespace echelon
