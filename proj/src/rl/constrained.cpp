#include "hrl/rl/constrained.hpp"

#include <algorithm>
#include <cmath>

namespace hrl::rl {

double ConstrainedState::lambda_norm() const {
    return std::sqrt(lambdas[0] * lambdas[0] + lambdas[1] * lambdas[1]);
}

double constrained_shaped_reward(double r, const std::array<double, 2>& depths,
                                 const ConstrainedState& cs) {
    double penalty = 0.0;
    for (std::size_t i = 0; i < cs.lambdas.size(); ++i)
        penalty += cs.lambdas[i] * std::max(0.0, depths[i] - cs.bounds[i]);
    return r - penalty;
}

ConstrainedState dual_update(const ConstrainedState& cs,
                             const std::array<double, 2>& avg_violations) {
    ConstrainedState out = cs;
    for (std::size_t i = 0; i < out.lambdas.size(); ++i)
        out.lambdas[i] = std::max(0.0, out.lambdas[i] + out.eta * avg_violations[i]);
    return out;
}

}  // namespace hrl::rl
