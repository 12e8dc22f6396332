#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hrl/mdp/env.hpp"
#include "hrl/rl/trainer.hpp"
#include "hrl/safety/safety.hpp"
#include "hrl/sim/scene.hpp"

namespace hrl::harness {

struct ExperimentConfig {
    rl::Strategy strategy = rl::Strategy::RobustQMask;
    sim::SceneConfig sim;
    mdp::EnvConfig env;
    mdp::RewardConfig reward;
    safety::SafetyConfig safety;
    rl::TrainConfig train;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int eval_episodes = 20;
};

// Parses the key = value experiment file (see README for the schema).
// Unknown keys, malformed values and cross-field inconsistencies are
// rejected with the offending key in the message. An empty file yields the
// defaults.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// True when two configs describe the same world (road, traffic, env,
// reward scale), which compare runs require.
bool same_environment(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace hrl::harness
