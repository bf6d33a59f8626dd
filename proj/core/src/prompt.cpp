#include "echelon/prompt.hpp"

#include <algorithm>
#include <charconv>
#include <regex>
#include <sstream>

#include "echelon/demand.hpp"
#include "echelon/errors.hpp"

namespace echelon {

namespace {

constexpr std::string_view kStrategy =
    "Golden rule of this game: Open orders should always equal to \"expected downstream orders + backlog\". "
    "If open orders are larger than this, the inventory will rise (once the open orders arrive). "
    "If open orders are smaller than this, the backlog will not go down and it may even rise. "
    "Please consider the lead time and place your order in advance. "
    "Remember that your upstream has its own lead time, so do not wait until your inventory runs out. "
    "Also, avoid ordering too many units at once. "
    "Try to spread your orders over multiple rounds to prevent the bullwhip effect. "
    "Anticipate future demand changes and adjust your orders accordingly to maintain a stable inventory level.";

std::string list_text(const std::vector<Units>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string_view role_name(int stage, int num_stages) {
  static constexpr std::string_view kRoles[] = {"retailer", "wholesaler", "distributor", "manufacturer"};
  if (num_stages != 4 || stage < 0 || stage >= 4) return {};
  return kRoles[stage];
}

std::string render_system_message(int stage, int num_stages) {
  if (stage < 0 || stage >= num_stages) throw InputError("stage out of range");
  std::ostringstream out;
  out << "You play a crucial role in a " << num_stages << "-stage supply chain as the stage " << stage + 1;
  if (const auto role = role_name(stage, num_stages); !role.empty())
    out << " (" << role << ")";
  else
    out << " of " << num_stages;
  out << ". Your goal is to minimize the total cost by managing inventory and orders effectively.";
  return out.str();
}

std::string format_menu(const ActionMenu& menu) {
  if (menu.empty()) throw InputError("restricted menu is empty");
  std::string out = "(";
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (i > 0) out += menu.size() == 2 ? " or " : (i + 1 == menu.size() ? ", or " : ", ");
    out += "[" + std::to_string(menu[i]) + "]";
  }
  return out + " only)";
}

std::string action_instruction(const PromptFlags& flags) {
  const std::string example = flags.restricted_menu ? format_menu(*flags.restricted_menu) : "(e.g. [0])";
  if (flags.chain_of_thought) {
    return "Please state your reason in 1-2 sentences first and then provide your action as a non-negative "
           "integer within brackets " + example + ".";
  }
  return "Please provide your action as a non-negative integer within brackets " + example + ".";
}

std::string render_round_prompt(const Observation& obs, Period period, const ScenarioConfig& scenario,
                                std::optional<Units> downstream_order, const PromptFlags& flags) {
  const int stage = obs.stage_index;
  if (stage < 0 || stage >= scenario.num_stages()) throw InputError("stage out of range");
  if (stage == 0 && downstream_order) throw InputError("the retailer has no downstream order");

  std::ostringstream out;
  out << "Now this is the round " << period << ", and you are at the stage " << stage + 1 << " of "
      << scenario.num_stages() << " in the supply chain. Given your current state:\n";
  out << " - Lead Time: " << obs.params.lead_time << " round(s)\n";
  out << " - Inventory Level: " << obs.inventory << " unit(s)\n";
  out << " - Current Backlog (you owing to the downstream): " << obs.backlog << " unit(s)\n";
  out << " - Upstream Backlog (your upstream owing to you): " << obs.upstream_backlog << " unit(s)\n";
  out << " - Previous Sales (in the recent round(s), from old to new): " << list_text(obs.recent_sales) << "\n";
  out << " - Arriving Deliveries (in this and the next round(s), from near to far): "
      << list_text(obs.arriving_deliveries) << "\n\n";

  if (flags.include_demand)
    out << "The expected demand at the retailer (stage 1) is "
        << describe_demand(scenario.demand, scenario.num_periods) << ". ";
  if (flags.include_downstream && downstream_order)
    out << "Your downstream order from the stage " << stage << " for this round is " << *downstream_order << ". ";
  out << "What is your action (order quantity) for this round?\n\n";

  if (flags.include_strategy) out << kStrategy << "\n\n";

  out << action_instruction(flags);
  return out.str();
}

Units parse_action(std::string_view response, const std::optional<ActionMenu>& menu) {
  // Any bracket that holds a single number, valid or not; the last one is the answer.
  static const std::regex bracketed(R"(\[\s*([+-]?\d+(?:\.\d*)?)\s*\])");
  const std::string text(response);
  std::smatch last;
  bool found = false;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), bracketed); it != std::sregex_iterator(); ++it) {
    last = *it;
    found = true;
  }
  if (!found) throw ParseError("no bracketed integer in response");

  std::string token = last[1].str();
  if (token.front() == '+') token.erase(0, 1);
  if (token.front() == '-') throw ParseError("negative action [" + last[1].str() + "]");
  if (token.find('.') != std::string::npos) throw ParseError("non-integer action [" + token + "]");

  Units value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) throw ParseError("action out of range [" + token + "]");

  if (menu && std::find(menu->begin(), menu->end(), value) == menu->end())
    throw ParseError("action " + std::to_string(value) + " is not one of " + format_menu(*menu));
  return value;
}

}  // namespace echelon
