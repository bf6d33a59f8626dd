#include "echelon/mock_agents.hpp"

#include <cmath>
#include <regex>
#include <vector>

#include "echelon/errors.hpp"
#include "echelon/policy.hpp"

namespace echelon {

MockClient::Responder preset_responder(const std::string& preset) {
  const auto rule = find_preset(preset).rule;
  return [rule, preset](const ChatRequest& request) -> std::string {
    if (!request.context) return "No state available. Action: [0]";
    const Units order = heuristic_order(rule, request.context->observation);
    return "Reason: following the " + preset + " rule. Action: [" + std::to_string(order) + "]";
  };
}

namespace {

const std::string* find_round_prompt(const ChatRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
    if (it->role == ChatRole::kUser && it->content.find("Now this is the round") != std::string::npos)
      return &it->content;
  }
  return nullptr;
}

Units follow_order(const std::string& prompt) {
  std::smatch m;
  static const std::regex downstream(R"(Your downstream order from the stage \d+ for this round is (\d+)\.)");
  if (std::regex_search(prompt, m, downstream)) return std::stoll(m[1].str());

  static const std::regex constant(R"(is a constant (\d+) units)");
  static const std::regex uniform(R"(U\{(\d+), (\d+)\})");
  static const std::regex normal(R"(N\(([0-9.]+), )");
  if (std::regex_search(prompt, m, constant)) return std::stoll(m[1].str());
  if (std::regex_search(prompt, m, uniform)) return (std::stoll(m[1].str()) + std::stoll(m[2].str())) / 2;
  if (std::regex_search(prompt, m, normal)) return static_cast<Units>(std::floor(std::stod(m[1].str()) + 0.5));

  static const std::regex sales(R"(from old to new\): \[([^\]]*)\])");
  if (std::regex_search(prompt, m, sales)) {
    const std::string list = m[1].str();
    const auto comma = list.rfind(',');
    const std::string last = comma == std::string::npos ? list : list.substr(comma + 1);
    if (!last.empty()) return std::stoll(last);
  }
  return 0;
}

Units snap_to_menu(const std::string& prompt, Units order) {
  static const std::regex menu_clause(R"(\(((?:\[\d+\](?:, |, or | or )?)+) only\))");
  std::smatch m;
  if (!std::regex_search(prompt, m, menu_clause)) return order;
  static const std::regex item(R"(\[(\d+)\])");
  const std::string clause = m[1].str();
  std::vector<Units> menu;
  for (auto it = std::sregex_iterator(clause.begin(), clause.end(), item); it != std::sregex_iterator(); ++it)
    menu.push_back(std::stoll((*it)[1].str()));
  Units best = menu.front();
  for (Units v : menu) {
    if (std::llabs(v - order) < std::llabs(best - order)) best = v;
  }
  return best;
}

}  // namespace

MockClient::Responder follow_responder() {
  return [](const ChatRequest& request) -> std::string {
    const std::string* prompt = find_round_prompt(request);
    if (prompt == nullptr) return "Action: [0]";
    const Units order = snap_to_menu(*prompt, follow_order(*prompt));
    return "Reason: matching the flow I expect from downstream. Action: [" + std::to_string(order) + "]";
  };
}

MockClient::Responder named_responder(const std::string& name) {
  if (name == "follow") return follow_responder();
  return preset_responder(find_preset(name).name);
}

}  // namespace echelon
