#include "echelon/chat.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "echelon/errors.hpp"

namespace echelon {

using nlohmann::json;

std::string_view to_string(ChatRole role) {
  switch (role) {
    case ChatRole::kSystem:
      return "system";
    case ChatRole::kUser:
      return "user";
    case ChatRole::kAssistant:
      return "assistant";
  }
  return "user";
}

ChatSession::ChatSession(int stage_index, std::string system_message) : stage_index_(stage_index) {
  messages_.push_back({ChatRole::kSystem, std::move(system_message)});
}

void ChatSession::append(ChatRole role, std::string content) { messages_.push_back({role, std::move(content)}); }

void ChatSession::truncate_to_system() { messages_.resize(1); }

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must be an absolute http(s) URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
  if (config_.api_key) {
    api_key_ = *config_.api_key;
  } else if (const char* env = std::getenv(config_.api_key_env.c_str()); env != nullptr && *env != '\0') {
    api_key_ = env;
  } else {
    throw ConfigError("no API token: set " + config_.api_key_env);
  }
  split_endpoint(config_.endpoint);
  if (config_.transport_attempts < 1) throw ConfigError("transport_attempts must be at least 1");
}

std::string HttpChatClient::request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages)
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  json body{{"model", request.model}, {"messages", messages}, {"temperature", request.temperature}};
  return body.dump();
}

std::string HttpChatClient::extract_content(std::string_view response_body) {
  try {
    const json j = json::parse(response_body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat-completion response: ") + e.what());
  }
}

std::string HttpChatClient::complete(const ChatRequest& request) const {
  const auto endpoint = split_endpoint(config_.endpoint);
  const auto body = request_body(request);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);

  std::string last_error;
  for (int attempt = 1; attempt <= config_.transport_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(config_.backoff * (attempt - 1));

    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

    auto res = client.Post(endpoint.path, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return extract_content(res->body);
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    // Client errors other than rate limiting will not improve on retry.
    if (res->status >= 400 && res->status < 500 && res->status != 408 && res->status != 429) break;
  }
  throw TransportError(last_error);
}

}  // namespace echelon
