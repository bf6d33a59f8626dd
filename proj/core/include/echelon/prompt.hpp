#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echelon/environment.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

using ActionMenu = std::vector<Units>;

/// Which prompt sections are rendered. Defaults are the best-performing
/// configuration: demand and downstream on, strategy off, reasoning on,
/// history kept.
struct PromptFlags {
  bool include_demand = true;
  bool include_downstream = true;
  bool include_strategy = false;
  bool chain_of_thought = true;
  bool keep_history = true;
  std::optional<ActionMenu> restricted_menu;

  friend bool operator==(const PromptFlags&, const PromptFlags&) = default;
};

/// "retailer", "wholesaler", "distributor", "manufacturer" for 4 stages, empty otherwise.
std::string_view role_name(int stage, int num_stages);

std::string render_system_message(int stage, int num_stages);

/// "([0], [4], or [8] only)"
std::string format_menu(const ActionMenu& menu);

/// Closing sentence asking for the bracketed action.
std::string action_instruction(const PromptFlags& flags);

/// The per-round user message. Throws InputError when a downstream order is
/// given for the retailer.
std::string render_round_prompt(const Observation& obs, Period period, const ScenarioConfig& scenario,
                                std::optional<Units> downstream_order, const PromptFlags& flags);

/// Last "[N]" in the response. Throws ParseError when none is present, the
/// bracket holds anything but a non-negative integer, or N is off the menu.
Units parse_action(std::string_view response, const std::optional<ActionMenu>& menu = std::nullopt);

}  // namespace echelon
