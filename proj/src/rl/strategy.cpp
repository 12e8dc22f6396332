#include "hrl/rl/strategy.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrl::rl {

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Traditional: return "traditional";
        case Strategy::Constrained: return "constrained";
        case Strategy::QMask: return "qmask";
        case Strategy::RobustQMask: return "robust_qmask";
    }
    throw std::invalid_argument("strategy_name: bad strategy");
}

Strategy strategy_from_name(std::string_view name) {
    for (auto s : {Strategy::Traditional, Strategy::Constrained, Strategy::QMask,
                   Strategy::RobustQMask}) {
        if (strategy_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown strategy: " + std::string(name));
}

bool strategy_uses_mask(Strategy s) {
    return s == Strategy::QMask || s == Strategy::RobustQMask;
}

double epsilon_at(const EpsSchedule& sched, int episode) {
    if (episode < 0) throw std::invalid_argument("epsilon_at: episode < 0");
    if (sched.decay_episodes <= 0 || episode >= sched.decay_episodes)
        return sched.eps_end;
    const double f =
        static_cast<double>(episode) / static_cast<double>(sched.decay_episodes);
    return sched.eps_start + f * (sched.eps_end - sched.eps_start);
}

std::array<double, nn::kOutputDim> shaped_q(
    const std::array<double, nn::kOutputDim>& q_raw,
    const safety::MaskBits& mask) {
    if (!mask.any_safe())
        throw std::logic_error("shaped_q: mask has no safe action");
    const double low = *std::min_element(q_raw.begin(), q_raw.end()) - 1.0;
    std::array<double, nn::kOutputDim> out = q_raw;
    for (int i = 0; i < nn::kOutputDim; ++i) {
        if (!mask.safe[i]) out[i] = low;
    }
    return out;
}

namespace {

int argmax_over(const std::array<double, nn::kOutputDim>& values,
                const std::array<bool, nn::kOutputDim>& allowed) {
    int best = -1;
    for (int i = 0; i < nn::kOutputDim; ++i) {
        if (!allowed[i]) continue;
        if (best < 0 || values[i] > values[best]) best = i;
    }
    return best;
}

int random_over(const std::array<bool, nn::kOutputDim>& allowed,
                std::mt19937_64& rng) {
    std::array<int, nn::kOutputDim> pool{};
    int n = 0;
    for (int i = 0; i < nn::kOutputDim; ++i)
        if (allowed[i]) pool[n++] = i;
    if (n == 0) return -1;
    std::uniform_int_distribution<int> pick(0, n - 1);
    return pool[pick(rng)];
}

}  // namespace

int select_from_q(Strategy strat, const std::array<double, nn::kOutputDim>& q_raw,
                  const safety::MaskBits& mask, double epsilon,
                  std::mt19937_64& rng) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("select_from_q: epsilon out of range");
    if (!mask.any_safe())
        throw std::logic_error("select_from_q: empty candidate set");

    const bool explore =
        epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon;
    if (explore) return random_over(mask.safe, rng);

    if (strat == Strategy::RobustQMask) {
        const auto shaped = shaped_q(q_raw, mask);
        return argmax_over(shaped, mask.safe);
    }
    return argmax_over(q_raw, mask.safe);
}

int select_action(Strategy strat, const nn::QNetwork& net,
                  const mdp::Observation& obs, const safety::MaskBits& mask,
                  double epsilon, std::mt19937_64& rng) {
    const auto q = net.forward(std::span<const double, nn::kInputDim>(
        obs.normalized.data(), nn::kInputDim));
    return select_from_q(strat, q, mask, epsilon, rng);
}

std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const nn::QNetwork& net,
                                    const TargetConfig& cfg) {
    if (batch.empty())
        throw std::invalid_argument("compute_targets: empty batch");
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const Transition* t : batch) {
        if (t->terminal) {
            targets.push_back(t->reward);
            continue;
        }
        const auto q = net.forward(std::span<const double, nn::kInputDim>(
            t->s_next.normalized.data(), nn::kInputDim));
        double best = 0.0;
        switch (cfg.strategy) {
            case Strategy::Traditional:
            case Strategy::Constrained: {
                // max over a' in A(s'): actions barred by the speed bounds
                // or the road edge never receive data, and letting their
                // free-floating outputs into the target is a runaway
                // optimism source.
                best = -std::numeric_limits<double>::infinity();
                for (int i = 0; i < nn::kOutputDim; ++i)
                    if (t->mask_next.admissible[i]) best = std::max(best, q[i]);
                break;
            }
            case Strategy::QMask: {
                best = -std::numeric_limits<double>::infinity();
                for (int i = 0; i < nn::kOutputDim; ++i)
                    if (t->mask_next.safe[i]) best = std::max(best, q[i]);
                break;
            }
            case Strategy::RobustQMask: {
                const auto shaped = shaped_q(q, t->mask_next);
                best = *std::max_element(shaped.begin(), shaped.end());
                break;
            }
        }
        targets.push_back(
            std::clamp(t->reward + cfg.gamma * best, cfg.floor, cfg.ceil));
    }
    return targets;
}

}  // namespace hrl::rl
