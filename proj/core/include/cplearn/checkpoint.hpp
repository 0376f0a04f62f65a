#pragma once

#include <string>

#include "cplearn/dqn.hpp"

namespace cplearn {

// Single versioned JSON file: network spec, agent config, every parameter
// tensor (row-major), and the exploration step counter. Round-trips exactly.
void save_agent(const DQNLearner& learner, const std::string& path);
DQNLearner load_agent(const std::string& path);

std::string agent_to_json(const DQNLearner& learner);
DQNLearner agent_from_json(const std::string& text);

} // namespace cplearn
