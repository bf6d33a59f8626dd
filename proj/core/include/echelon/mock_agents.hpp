#pragma once

#include <string>

#include "echelon/chat.hpp"

namespace echelon {

/// Replies with the named heuristic preset's order, computed from the
/// request context. Requests without context get "[0]".
MockClient::Responder preset_responder(const std::string& preset);

/// Reads the rendered prompt: orders the downstream order when one is
/// stated, otherwise the mean of the described demand, otherwise the last
/// sale. Snaps to a restricted menu when the prompt carries one.
MockClient::Responder follow_responder();

/// "base-stock", any other preset name, or "follow". Throws LookupError.
MockClient::Responder named_responder(const std::string& name);

}  // namespace echelon
