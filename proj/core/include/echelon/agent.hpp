#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "echelon/chat.hpp"
#include "echelon/environment.hpp"
#include "echelon/prompt.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

struct AgentConfig {
  PromptFlags flags;
  std::string model = "gpt-4";
  double temperature = 1.0;
  std::chrono::milliseconds timeout{60000};
  /// Total attempts per decision, including the first.
  int retry_limit = 3;
  /// Per-stage replacement for flags.restricted_menu; nullopt lifts the menu.
  std::map<int, std::optional<ActionMenu>> stage_menu_override;

  PromptFlags flags_for_stage(int stage) const;
};

struct TranscriptEntry {
  int stage_index = 0;
  Period period = 0;
  int attempt = 0;
  ChatRole role = ChatRole::kUser;
  std::string content;
  bool warning = false;
};

struct Decision {
  Units order = 0;
  bool fallback = false;
  std::vector<TranscriptEntry> transcript;
};

/// Raised by round_of_actions; carries the failing stage.
class AgentError : public std::runtime_error {
 public:
  AgentError(int stage, const std::string& what);
  int stage() const { return stage_; }

 private:
  int stage_;
};

/// Asks one stage agent for its order. Unparseable replies are re-asked up
/// to retry_limit attempts in total; on exhaustion the order falls back to 0
/// with a warning entry. TransportError propagates unchanged.
Decision agent_decide(ChatSession& session, const ChatClient& client, const Observation& obs, Period period,
                      const ScenarioConfig& scenario, std::optional<Units> downstream_order,
                      const AgentConfig& config);

struct RoundResult {
  ActionVector actions;
  std::vector<TranscriptEntry> transcript;
  int fallbacks = 0;
};

/// Queries stages 0..M-1 in order. Stage m >= 1 sees stage m-1's order from
/// this same round when downstream information is enabled.
RoundResult round_of_actions(std::vector<ChatSession>& sessions, const ChatClient& client,
                             const std::vector<Observation>& observations, Period period,
                             const ScenarioConfig& scenario, const AgentConfig& config);

std::vector<ChatSession> make_sessions(int num_stages);

}  // namespace echelon
