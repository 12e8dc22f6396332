#pragma once

#include <array>
#include <random>
#include <string_view>
#include <vector>

#include "hrl/nn/network.hpp"
#include "hrl/rl/replay.hpp"

namespace hrl::rl {

enum class Strategy { Traditional, Constrained, QMask, RobustQMask };

std::string_view strategy_name(Strategy s);
Strategy strategy_from_name(std::string_view name);
bool strategy_uses_mask(Strategy s);

struct EpsSchedule {
    double eps_start = 1.0;
    double eps_end = 0.05;
    int decay_episodes = 150;
};

// Linear decay, constant after the horizon.
double epsilon_at(const EpsSchedule& sched, int episode);

// Unsafe entries replaced by (min over all raw outputs) - 1, so the argmax
// is always a safe action. Throws when the mask has no safe action.
std::array<double, nn::kOutputDim> shaped_q(
    const std::array<double, nn::kOutputDim>& q_raw,
    const safety::MaskBits& mask);

// Epsilon-greedy selection over a precomputed action-value vector. The
// candidate set is the mask's safe set (for unmasked strategies the caller
// passes an admissible-as-safe mask); the greedy branch of RobustQMask uses
// the shaped values.
int select_from_q(Strategy strat, const std::array<double, nn::kOutputDim>& q_raw,
                  const safety::MaskBits& mask, double epsilon,
                  std::mt19937_64& rng);

int select_action(Strategy strat, const nn::QNetwork& net,
                  const mdp::Observation& obs, const safety::MaskBits& mask,
                  double epsilon, std::mt19937_64& rng);

struct TargetConfig {
    Strategy strategy = Strategy::RobustQMask;
    double gamma = 0.99;
    double floor = -1e9;  // feasible-return bounds, see TrainConfig
    double ceil = 1e9;
};

// Bootstrapped regression targets: r for terminal transitions, otherwise
// r + gamma * max_a' V(s', a') with V raw, safe-restricted, or shaped
// depending on the strategy.
std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const nn::QNetwork& net,
                                    const TargetConfig& cfg);

}  // namespace hrl::rl
