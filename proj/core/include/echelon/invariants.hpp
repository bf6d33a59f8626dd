#pragma once

#include <string>
#include <vector>

#include "echelon/harness.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

/// Post-hoc audit of a finished record: non-negativity, capacity and
/// fulfillment caps, backlog recursions, flow conservation and the reward
/// sum. Returns one message per violation; empty means clean.
std::vector<std::string> check_record(const EpisodeRecord& record, const ScenarioConfig& config);

}  // namespace echelon
