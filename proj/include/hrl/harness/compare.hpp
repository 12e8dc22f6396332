#pragma once

#include <map>
#include <string>
#include <vector>

#include "hrl/harness/run.hpp"

namespace hrl::harness {

struct StrategyOutcome {
    std::string name;
    // One entry per seed, aligned with the config's seed list.
    std::vector<int> plateau;
    std::vector<int> eval_collisions;
    std::vector<double> mean_reward_before_collision;
    std::vector<std::vector<double>> reward_curves;  // per seed, per episode
};

struct CompareReport {
    std::vector<StrategyOutcome> outcomes;
    // Per seed: strategies ordered by plateau episode (fastest first).
    std::vector<std::vector<std::string>> plateau_ranking;
};

// Trains and evaluates every config over its seed list (fanning runs out
// across `jobs` workers), then reduces the completed run files into curve
// CSVs, plateau/collision/reward tables and a text summary under out_dir.
// Configs must share the environment settings and the seed list.
CompareReport compare_strategies(const std::vector<ExperimentConfig>& cfgs,
                                 const std::string& out_dir, int jobs = 2);

}  // namespace hrl::harness
