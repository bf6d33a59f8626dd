#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echelon/environment.hpp"

namespace echelon {

enum class ChatRole { kSystem, kUser, kAssistant };

std::string_view to_string(ChatRole role);

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// One stage agent's conversation. messages[0] is always the system message.
class ChatSession {
 public:
  ChatSession(int stage_index, std::string system_message);

  int stage_index() const { return stage_index_; }
  const std::string& system_message() const { return messages_.front().content; }
  const std::vector<ChatMessage>& messages() const { return messages_; }

  void append(ChatRole role, std::string content);
  /// Drops everything except the system message.
  void truncate_to_system();

 private:
  int stage_index_;
  std::vector<ChatMessage> messages_;
};

/// Simulator-side facts attached to a request. Remote clients ignore it;
/// mocks may use it to stand in for a model.
struct AgentContext {
  int stage_index = 0;
  Period period = 0;
  Observation observation;
  std::optional<Units> downstream_order;
  int attempt = 1;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model;
  double temperature = 1.0;
  std::chrono::milliseconds timeout{60000};
  std::optional<AgentContext> context;
};

/// Chat-completion backend. Implementations must tolerate concurrent calls
/// from independent episodes.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) const = 0;
};

/// Deterministic client backed by a caller-supplied function.
class MockClient final : public ChatClient {
 public:
  using Responder = std::function<std::string(const ChatRequest&)>;

  explicit MockClient(Responder responder) : responder_(std::move(responder)) {}
  std::string complete(const ChatRequest& request) const override { return responder_(request); }

 private:
  Responder responder_;
};

struct HttpClientConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  /// Used instead of the environment variable when set.
  std::optional<std::string> api_key;
  int transport_attempts = 3;
  std::chrono::milliseconds backoff{500};
};

/// OpenAI-style chat-completion client: POSTs {model, messages, temperature}
/// and reads choices[0].message.content.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);

  std::string complete(const ChatRequest& request) const override;

  /// Request body as sent on the wire.
  static std::string request_body(const ChatRequest& request);
  /// Throws TransportError on malformed bodies.
  static std::string extract_content(std::string_view response_body);

 private:
  HttpClientConfig config_;
  std::string api_key_;
};

}  // namespace echelon
