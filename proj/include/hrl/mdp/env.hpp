#pragma once

#include <cstdint>
#include <optional>

#include "hrl/mdp/action.hpp"
#include "hrl/mdp/observation.hpp"
#include "hrl/mdp/reward.hpp"
#include "hrl/sim/scene.hpp"

namespace hrl::mdp {

struct StepInfo {
    bool collision = false;
    double ego_v = 0.0;
    double t = 0.0;
};

struct StepResult {
    Observation obs;
    double reward = 0.0;
    bool terminal = false;
    StepInfo info;
};

// Episodic MDP wrapper: one policy decision per policy period, terminal on
// collision or when the episode duration is reached.
class HighwayEnv {
  public:
    HighwayEnv(sim::SceneConfig sim_cfg, EnvConfig env_cfg, RewardConfig reward);

    Observation reset(std::uint64_t seed);
    // Start an episode from an externally constructed scene (snapshots,
    // hand-built situations).
    Observation reset_scene(sim::Scene scene);
    StepResult step(MetaAction a);

    const sim::Scene& scene() const;
    bool terminal() const { return terminal_; }
    int steps_taken() const { return steps_; }
    std::array<bool, kNumActions> admissible() const;

    const sim::SceneConfig& sim_config() const { return sim_cfg_; }
    const EnvConfig& env_config() const { return env_cfg_; }
    const RewardConfig& reward_config() const { return reward_; }

  private:
    sim::SceneConfig sim_cfg_;
    EnvConfig env_cfg_;
    RewardConfig reward_;
    std::optional<sim::Scene> scene_;
    bool terminal_ = true;
    int steps_ = 0;
};

}  // namespace hrl::mdp
