#include "echelon/agent.hpp"

#include "echelon/errors.hpp"

namespace echelon {

PromptFlags AgentConfig::flags_for_stage(int stage) const {
  PromptFlags f = flags;
  if (const auto it = stage_menu_override.find(stage); it != stage_menu_override.end()) f.restricted_menu = it->second;
  return f;
}

AgentError::AgentError(int stage, const std::string& what)
    : std::runtime_error("stage " + std::to_string(stage + 1) + ": " + what), stage_(stage) {}

Decision agent_decide(ChatSession& session, const ChatClient& client, const Observation& obs, Period period,
                      const ScenarioConfig& scenario, std::optional<Units> downstream_order,
                      const AgentConfig& config) {
  if (config.retry_limit < 1) throw InputError("retry_limit must be at least 1");
  const PromptFlags flags = config.flags_for_stage(obs.stage_index);
  if (!flags.include_downstream) downstream_order.reset();
  if (!flags.keep_history) session.truncate_to_system();

  Decision decision;
  auto log = [&](int attempt, ChatRole role, const std::string& content, bool warning = false) {
    decision.transcript.push_back({obs.stage_index, period, attempt, role, content, warning});
  };

  const std::string prompt = render_round_prompt(obs, period, scenario, downstream_order, flags);
  for (int attempt = 1; attempt <= config.retry_limit; ++attempt) {
    const std::string user =
        attempt == 1 ? prompt : "Your reply did not contain a valid action. " + action_instruction(flags);
    session.append(ChatRole::kUser, user);
    log(attempt, ChatRole::kUser, user);

    ChatRequest request{session.messages(), config.model, config.temperature, config.timeout,
                        AgentContext{obs.stage_index, period, obs, downstream_order, attempt}};
    std::string reply = client.complete(request);
    session.append(ChatRole::kAssistant, reply);
    log(attempt, ChatRole::kAssistant, reply);

    try {
      decision.order = parse_action(reply, flags.restricted_menu);
      return decision;
    } catch (const ParseError& e) {
      log(attempt, ChatRole::kSystem, std::string("parse failure: ") + e.what(), true);
    }
  }

  decision.order = 0;
  decision.fallback = true;
  log(config.retry_limit, ChatRole::kSystem,
      "no valid action after " + std::to_string(config.retry_limit) + " attempt(s); ordering 0", true);
  return decision;
}

RoundResult round_of_actions(std::vector<ChatSession>& sessions, const ChatClient& client,
                             const std::vector<Observation>& observations, Period period,
                             const ScenarioConfig& scenario, const AgentConfig& config) {
  const auto num_stages = static_cast<std::size_t>(scenario.num_stages());
  if (sessions.size() != num_stages || observations.size() != num_stages)
    throw InputError("need one session and one observation per stage");

  RoundResult round;
  round.actions.reserve(num_stages);
  for (std::size_t m = 0; m < num_stages; ++m) {
    const int stage = static_cast<int>(m);
    std::optional<Units> downstream;
    if (m > 0 && config.flags.include_downstream) downstream = round.actions[m - 1];
    try {
      auto decision = agent_decide(sessions[m], client, observations[m], period, scenario, downstream, config);
      round.actions.push_back(decision.order);
      if (decision.fallback) ++round.fallbacks;
      std::move(decision.transcript.begin(), decision.transcript.end(), std::back_inserter(round.transcript));
    } catch (const std::exception& e) {
      throw AgentError(stage, e.what());
    }
  }
  return round;
}

std::vector<ChatSession> make_sessions(int num_stages) {
  std::vector<ChatSession> sessions;
  sessions.reserve(static_cast<std::size_t>(num_stages));
  for (int m = 0; m < num_stages; ++m) sessions.emplace_back(m, render_system_message(m, num_stages));
  return sessions;
}

}  // namespace echelon
