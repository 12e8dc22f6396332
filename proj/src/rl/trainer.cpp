#include "hrl/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrl/safety/safety.hpp"

namespace hrl::rl {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream,
                       std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1) + stream;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Agent::Agent(const TrainConfig& cfg, std::uint64_t net_seed)
    : cfg_(cfg),
      net_(nn::QNetwork::glorot_uniform(net_seed)),
      adam_(nn::QNetwork::param_count(), cfg.adam),
      replay_(cfg.buffer_capacity),
      constrained_(cfg.constrained),
      grad_(nn::QNetwork::param_count(), 0.0) {
    if (!cfg_.valid()) throw std::invalid_argument("Agent: bad train config");
}

double Agent::train_step(const std::vector<const Transition*>& batch) {
    const auto targets =
        compute_targets(batch, net_, {cfg_.strategy, cfg_.gamma,
                                      cfg_.target_floor, cfg_.target_ceil});

    std::fill(grad_.begin(), grad_.end(), 0.0);
    double loss = 0.0;
    std::size_t terms = 0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Transition& t = *batch[b];
        const auto trace = net_.forward_trace(
            std::span<const double, nn::kInputDim>(t.s.normalized.data(),
                                                   nn::kInputDim));
        std::array<double, nn::kOutputDim> dLdq{};
        const double err = trace.q[t.action] - targets[b];
        dLdq[t.action] = 2.0 * err;
        loss += err * err;
        ++terms;

        if (cfg_.strategy == Strategy::RobustQMask) {
            // Regress admissible-but-unsafe actions toward one below the
            // lowest safe output so unsafety generalizes to neighboring
            // states. The minimum is taken over the safe outputs: a target
            // of min-over-all minus one would chase its own regressand down
            // without bound once the unsafe output becomes the minimum.
            double safe_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i < nn::kOutputDim; ++i) {
                if (t.mask_s.safe[i]) safe_min = std::min(safe_min, trace.q[i]);
            }
            const double low = safe_min - 1.0;
            for (int i = 0; i < nn::kOutputDim; ++i) {
                if (!t.mask_s.admissible[i] || t.mask_s.safe[i]) continue;
                const double err_u = trace.q[i] - low;
                dLdq[i] += 2.0 * err_u;
                loss += err_u * err_u;
                ++terms;
            }
        }
        net_.backward(trace, dLdq, grad_);
    }

    const double inv = 1.0 / static_cast<double>(terms);
    loss *= inv;
    if (!std::isfinite(loss)) {
        ++skipped_updates_;
        return loss;
    }
    for (double& g : grad_) g *= inv;
    // Global-norm clip: bootstrapped targets with no target network can
    // otherwise run away during the first updates.
    double norm_sq = 0.0;
    for (double g : grad_) norm_sq += g * g;
    if (norm_sq > cfg_.grad_clip * cfg_.grad_clip) {
        const double scale = cfg_.grad_clip / std::sqrt(norm_sq);
        for (double& g : grad_) g *= scale;
    }
    if (!adam_.step(net_.params(), grad_)) ++skipped_updates_;
    return loss;
}

Trainer::Trainer(TrainerConfig cfg, mdp::HighwayEnv& env, Agent& agent,
                 std::uint64_t seed)
    : cfg_(std::move(cfg)), env_(env), agent_(agent), seed_(seed),
      agent_rng_(mix_seed(seed, kAgentStream, 0)) {}

safety::MaskBits decision_mask(const mdp::HighwayEnv& env, Strategy strategy,
                               const safety::SafetyConfig& safety_cfg) {
    if (strategy_uses_mask(strategy)) {
        return safety::mask_actions(env.scene(), safety_cfg, env.env_config())
            .bits;
    }
    safety::MaskBits m;
    m.admissible = env.admissible();
    m.safe = m.admissible;
    return m;
}

safety::MaskBits Trainer::current_mask() const {
    return decision_mask(env_, agent_.config().strategy, cfg_.safety);
}

EpisodeLog Trainer::run_episode(int episode_index) {
    const TrainConfig& tc = agent_.config();
    EpisodeLog log;
    log.episode = episode_index;
    log.epsilon = epsilon_at(tc.eps, episode_index);

    mdp::Observation obs =
        env_.reset(mix_seed(seed_, kTrainStream, episode_index));
    safety::MaskBits mask = current_mask();

    std::array<double, 2> violation_sum{0.0, 0.0};
    const bool constrained = tc.strategy == Strategy::Constrained;

    while (!env_.terminal()) {
        const int a = select_action(tc.strategy, agent_.net(), obs, mask,
                                    log.epsilon, agent_rng_);
        std::array<double, 2> depths{0.0, 0.0};
        if (constrained) {
            depths = safety::violation_depths(env_.scene(),
                                              static_cast<mdp::MetaAction>(a),
                                              cfg_.safety, env_.env_config());
            // Clamp runaway slack so one wide-open step cannot dominate the
            // episode average.
            for (std::size_t i = 0; i < depths.size(); ++i) {
                const double c = depths[i] - agent_.constrained().bounds[i];
                violation_sum[i] += std::max(c, -10.0);
            }
        }

        const mdp::StepResult res = env_.step(static_cast<mdp::MetaAction>(a));
        double reward = res.reward;
        if (constrained)
            reward = constrained_shaped_reward(reward, depths,
                                               agent_.constrained());

        Transition t;
        t.s = obs;
        t.action = a;
        t.reward = reward;
        t.s_next = res.obs;
        t.terminal = res.terminal;
        t.mask_s = mask;
        if (!res.terminal) {
            mask = current_mask();
            t.mask_next = mask;
        } else {
            t.mask_next = safety::MaskBits::all_safe();
        }
        agent_.replay().push(std::move(t));

        obs = res.obs;
        log.total_reward += reward;
        ++log.steps;
        log.collision = log.collision || res.info.collision;
    }

    // Episode-end update: fixed number of gradient iterations on uniform
    // with-replacement mini-batches.
    std::array<double, nn::kOutputDim> q_probe_before{};
    const auto probe = agent_.replay().sample(1, agent_rng_);
    q_probe_before = agent_.net().forward(std::span<const double, nn::kInputDim>(
        probe[0]->s.normalized.data(), nn::kInputDim));

    double loss_sum = 0.0;
    for (int it = 0; it < tc.iterations_per_update; ++it) {
        const auto batch = agent_.replay().sample(tc.batch_size, agent_rng_);
        loss_sum += agent_.train_step(batch);
    }
    log.loss_mean = loss_sum / tc.iterations_per_update;

    const auto q_probe_after =
        agent_.net().forward(std::span<const double, nn::kInputDim>(
            probe[0]->s.normalized.data(), nn::kInputDim));
    for (int i = 0; i < nn::kOutputDim; ++i) {
        const double d = q_probe_after[i] - q_probe_before[i];
        log.q_drift += d * d;
    }

    if (constrained) {
        std::array<double, 2> avg{0.0, 0.0};
        for (std::size_t i = 0; i < avg.size(); ++i)
            avg[i] = violation_sum[i] / std::max(1, log.steps);
        agent_.constrained() = dual_update(agent_.constrained(), avg);
        log.lambda_norm = agent_.constrained().lambda_norm();
    }
    return log;
}

std::vector<EpisodeLog> Trainer::run_all() {
    std::vector<EpisodeLog> rows;
    rows.reserve(agent_.config().episodes);
    for (int e = 0; e < agent_.config().episodes; ++e)
        rows.push_back(run_episode(e));
    return rows;
}

}  // namespace hrl::rl
