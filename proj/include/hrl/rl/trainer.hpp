#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hrl/mdp/env.hpp"
#include "hrl/nn/adam.hpp"
#include "hrl/nn/network.hpp"
#include "hrl/rl/constrained.hpp"
#include "hrl/rl/replay.hpp"
#include "hrl/rl/strategy.hpp"

namespace hrl::rl {

// Deterministic seed derivation (splitmix64 over base ^ stream ^ index), so
// training and evaluation episode seeds come from disjoint streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream,
                       std::uint64_t index);

inline constexpr std::uint64_t kTrainStream = 0x7261696e5f747261ULL;
inline constexpr std::uint64_t kEvalStream = 0x6c6176655f6c6176ULL;
inline constexpr std::uint64_t kAgentStream = 0x746e6567615f6e67ULL;
inline constexpr std::uint64_t kNetStream = 0x74656e5f74656e00ULL;

struct TrainConfig {
    Strategy strategy = Strategy::RobustQMask;
    double gamma = 0.99;
    nn::AdamConfig adam;  // alpha defaults to 0.01
    int batch_size = 50;
    std::size_t buffer_capacity = 50;
    int episodes = 200;
    int iterations_per_update = 150;
    double grad_clip = 10.0;  // global gradient norm bound
    // Feasible-return box for the bootstrap targets. Any exact action value
    // lies inside it, so the projection cannot move a correct fixed point,
    // but it stops the live-target iteration from running away.
    double target_floor = -1e9;
    double target_ceil = 1e9;
    EpsSchedule eps;
    ConstrainedState constrained;  // eta and bounds; multipliers start at 0

    bool valid() const {
        return gamma >= 0.0 && gamma <= 1.0 && batch_size >= 1 &&
               static_cast<std::size_t>(batch_size) <= buffer_capacity &&
               episodes >= 0 && iterations_per_update >= 1 && adam.alpha > 0;
    }
};

// Network, optimizer, replay and multipliers of one learner.
class Agent {
  public:
    Agent(const TrainConfig& cfg, std::uint64_t net_seed);

    // One gradient iteration on a sampled batch. Returns the mean squared
    // error; a non-finite loss skips the parameter update and is counted.
    double train_step(const std::vector<const Transition*>& batch);

    nn::QNetwork& net() { return net_; }
    const nn::QNetwork& net() const { return net_; }
    nn::AdamState& adam() { return adam_; }
    ReplayBuffer& replay() { return replay_; }
    ConstrainedState& constrained() { return constrained_; }
    const TrainConfig& config() const { return cfg_; }
    int skipped_updates() const { return skipped_updates_; }

  private:
    TrainConfig cfg_;
    nn::QNetwork net_;
    nn::AdamState adam_;
    ReplayBuffer replay_;
    ConstrainedState constrained_;
    std::vector<double> grad_;
    int skipped_updates_ = 0;
};

struct EpisodeLog {
    int episode = 0;
    double epsilon = 0.0;
    double total_reward = 0.0;
    int steps = 0;
    bool collision = false;
    double loss_mean = 0.0;
    double lambda_norm = 0.0;
    double q_drift = 0.0;  // ||Q_after - Q_before||^2 on a probe batch, diagnostic
};

struct TrainerConfig {
    TrainConfig train;
    safety::SafetyConfig safety;
};

// Mask governing action selection at the current scene: the safety mask for
// masked strategies, admissible-as-safe for the others.
safety::MaskBits decision_mask(const mdp::HighwayEnv& env, Strategy strategy,
                               const safety::SafetyConfig& safety_cfg);

// Episode loop of the batch learner: interact for one episode, push
// transitions, then run the configured number of gradient iterations.
class Trainer {
  public:
    Trainer(TrainerConfig cfg, mdp::HighwayEnv& env, Agent& agent,
            std::uint64_t seed);

    EpisodeLog run_episode(int episode_index);
    std::vector<EpisodeLog> run_all();

    // Mask used for acting/bootstrapping at the current scene: the safety
    // mask for masked strategies, admissible-as-safe otherwise.
    safety::MaskBits current_mask() const;

  private:
    TrainerConfig cfg_;
    mdp::HighwayEnv& env_;
    Agent& agent_;
    std::uint64_t seed_;
    std::mt19937_64 agent_rng_;
};

}  // namespace hrl::rl
