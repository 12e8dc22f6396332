#pragma once

#include <array>

namespace hrl::rl {

// Lagrangian treatment of the free-space restrictions: one multiplier per
// inequality constraint (leader-side and follower-side penetration), updated
// by projected dual ascent at episode boundaries.
struct ConstrainedState {
    std::array<double, 2> lambdas{0.0, 0.0};
    std::array<double, 2> bounds{0.0, 0.0};  // C'_i
    double eta = 0.05;

    double lambda_norm() const;
};

// r' = r - sum_i lambda_i * max(0, c_i - C_i)
double constrained_shaped_reward(double r, const std::array<double, 2>& depths,
                                 const ConstrainedState& cs);

// lambda_i <- max(0, lambda_i + eta * avg_violation_i); avg violations are
// signed so slack decays the multipliers.
ConstrainedState dual_update(const ConstrainedState& cs,
                             const std::array<double, 2>& avg_violations);

}  // namespace hrl::rl
