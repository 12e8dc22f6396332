#pragma once

#include <algorithm>

#include "hrl/sim/vehicle.hpp"

namespace hrl::mdp {

enum class RewardMode { Traditional, SpeedOnly };

struct RewardConfig {
    double b = 1.0;   // speed coefficient
    double c = 10.0;  // collision penalty coefficient
    RewardMode mode = RewardMode::Traditional;

    bool valid() const { return b > 0.0 && c >= 0.0; }
};

// r = b * (v - v_min) / (v_max - v_min) - c * [collided]
inline double reward_traditional(double ego_v, bool collided,
                                 const RewardConfig& cfg,
                                 const sim::RoadConfig& road) {
    const double v = std::clamp(ego_v, road.v_min, road.v_max);
    const double speed_term =
        cfg.b * (v - road.v_min) / (road.v_max - road.v_min);
    return speed_term - (collided ? cfg.c : 0.0);
}

// Speed term only; masked strategies never collide so the penalty is moot.
inline double reward_speed(double ego_v, const RewardConfig& cfg,
                           const sim::RoadConfig& road) {
    RewardConfig no_penalty = cfg;
    no_penalty.c = 0.0;
    return reward_traditional(ego_v, false, no_penalty, road);
}

}  // namespace hrl::mdp
