#include "hrl/mdp/env.hpp"

#include <cmath>
#include <stdexcept>

namespace hrl::mdp {

HighwayEnv::HighwayEnv(sim::SceneConfig sim_cfg, EnvConfig env_cfg,
                       RewardConfig reward)
    : sim_cfg_(std::move(sim_cfg)), env_cfg_(env_cfg), reward_(reward) {
    const double ratio = env_cfg_.policy_period / sim_cfg_.dt;
    if (std::abs(ratio - std::lround(ratio)) > 1e-9)
        throw std::invalid_argument("HighwayEnv: dt must divide the policy period");
    if (!reward_.valid()) throw std::invalid_argument("HighwayEnv: bad reward config");
}

Observation HighwayEnv::reset(std::uint64_t seed) {
    return reset_scene(sim::Scene::initial(sim_cfg_, seed));
}

Observation HighwayEnv::reset_scene(sim::Scene scene) {
    scene_ = std::move(scene);
    terminal_ = scene_->collided();
    steps_ = 0;
    return build_observation(*scene_);
}

const sim::Scene& HighwayEnv::scene() const {
    if (!scene_) throw std::logic_error("HighwayEnv: reset() not called");
    return *scene_;
}

std::array<bool, kNumActions> HighwayEnv::admissible() const {
    return admissible_actions(scene().ego(), sim_cfg_.road, env_cfg_);
}

StepResult HighwayEnv::step(MetaAction a) {
    if (!scene_) throw std::logic_error("HighwayEnv: reset() not called");
    if (terminal_) throw std::logic_error("HighwayEnv: step after terminal");

    const EgoProfile profile = apply_meta_action(*scene_, a, env_cfg_);
    const int n = env_cfg_.micro_steps(sim_cfg_.dt);
    for (int i = 0; i < n; ++i) {
        const auto [accel, hrate] =
            profile.control(scene_->ego(), sim_cfg_, sim_cfg_.dt);
        scene_->step(accel, hrate, sim_cfg_.dt);
        if (scene_->collided()) break;
    }
    ++steps_;

    const bool collided = scene_->collided();
    const double ego_v = scene_->ego().v;
    StepResult res;
    res.info = {collided, ego_v, scene_->time()};
    res.reward = reward_.mode == RewardMode::Traditional
                     ? reward_traditional(ego_v, collided, reward_, sim_cfg_.road)
                     : reward_speed(ego_v, reward_, sim_cfg_.road);
    terminal_ = collided ||
                scene_->time() >= env_cfg_.episode_duration - 1e-9;
    res.terminal = terminal_;
    res.obs = build_observation(*scene_);
    return res;
}

}  // namespace hrl::mdp
