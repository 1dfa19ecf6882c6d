#pragma once

#include <string>

#include "dflow/rl/agent.hpp"

namespace dflow::rl {

inline constexpr int kCheckpointVersion = 1;

// Versioned JSON snapshot of every network's parameters plus the agent
// config (optimizer state is not part of a policy snapshot). Reloading gives
// bit-identical parameters.
void save_checkpoint(const Agent& agent, const std::string& path);

// Throws ParseError (unreadable/bad JSON) or SchemaMismatch (wrong version or
// layout).
Agent load_checkpoint(const std::string& path);

std::string checkpoint_to_json(const Agent& agent);
Agent checkpoint_from_json(const std::string& text, const std::string& origin = "<string>");

}  // namespace dflow::rl
