#pragma once

#include <string>

#include "echelon/rng.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

/// One customer demand draw for `period` (1-based). Throws ConfigError when a
/// piecewise model does not cover the period.
Units sample_demand(const DemandModel& model, Period period, Engine& rng);

/// Human-readable phrase, e.g. "a discrete uniform distribution U{0, 4} for all 12 rounds".
std::string describe_demand(const DemandModel& model, int num_periods);

}  // namespace echelon
