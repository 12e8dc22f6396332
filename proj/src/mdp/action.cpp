#include "hrl/mdp/action.hpp"

#include <cmath>
#include <stdexcept>

#include "hrl/sim/kinematics.hpp"

namespace hrl::mdp {

std::string_view action_name(MetaAction a) {
    switch (a) {
        case MetaAction::Idle: return "IDLE";
        case MetaAction::LaneRight: return "LANE_RIGHT";
        case MetaAction::LaneLeft: return "LANE_LEFT";
        case MetaAction::Faster: return "FASTER";
        case MetaAction::Slower: return "SLOWER";
    }
    throw std::invalid_argument("action_name: bad action");
}

MetaAction action_from_name(std::string_view name) {
    for (int i = 0; i < kNumActions; ++i) {
        if (action_name(static_cast<MetaAction>(i)) == name)
            return static_cast<MetaAction>(i);
    }
    throw std::invalid_argument("unknown action: " + std::string(name));
}

std::array<bool, kNumActions> admissible_actions(const sim::VehicleState& ego,
                                                 const sim::RoadConfig& road,
                                                 const EnvConfig& env) {
    std::array<bool, kNumActions> ok{};
    ok[static_cast<int>(MetaAction::Idle)] = true;
    ok[static_cast<int>(MetaAction::LaneRight)] = ego.lane > 0;
    ok[static_cast<int>(MetaAction::LaneLeft)] = ego.lane < road.n_lanes - 1;
    ok[static_cast<int>(MetaAction::Faster)] = ego.v + env.delta_v <= road.v_max;
    ok[static_cast<int>(MetaAction::Slower)] = ego.v - env.delta_v >= road.v_min;
    return ok;
}

std::pair<double, double> EgoProfile::control(const sim::VehicleState& ego,
                                              const sim::SceneConfig& cfg,
                                              double dt) const {
    const double accel =
        std::clamp(cfg.speed_gain * (v_ref - ego.v), -ego.a_max, ego.a_max);
    const double hrate = sim::lateral_heading_rate(
        ego, cfg.road.lane_center(target_lane), cfg.lateral_gain, cfg.psi_max,
        dt);
    return {accel, hrate};
}

EgoProfile apply_meta_action(const sim::Scene& scene, MetaAction a,
                             const EnvConfig& env) {
    const sim::VehicleState& ego = scene.ego();
    const sim::RoadConfig& road = scene.config().road;
    const auto ok = admissible_actions(ego, road, env);
    if (!ok[static_cast<int>(a)])
        throw std::logic_error("apply_meta_action: inadmissible action " +
                               std::string(action_name(a)));

    EgoProfile profile;
    profile.v_ref = ego.v;
    profile.target_lane = ego.lane;
    switch (a) {
        case MetaAction::Idle:
            break;
        case MetaAction::LaneRight:
            profile.target_lane = ego.lane - 1;
            break;
        case MetaAction::LaneLeft:
            profile.target_lane = ego.lane + 1;
            break;
        case MetaAction::Faster:
            profile.v_ref = std::min(ego.v + env.delta_v, road.v_max);
            break;
        case MetaAction::Slower:
            profile.v_ref = std::max(ego.v - env.delta_v, road.v_min);
            break;
    }
    return profile;
}

std::vector<EgoPose> simulate_ego_profile(sim::VehicleState ego,
                                          const EgoProfile& profile,
                                          const sim::SceneConfig& cfg,
                                          int n_steps, double dt) {
    std::vector<EgoPose> out;
    out.reserve(n_steps + 1);
    out.push_back({ego.x, ego.y, ego.v, ego.psi, ego.lane});
    for (int i = 0; i < n_steps; ++i) {
        const auto [accel, hrate] = profile.control(ego, cfg, dt);
        ego = sim::advance_vehicle(ego, accel, hrate, dt, cfg.psi_max, cfg.road);
        out.push_back({ego.x, ego.y, ego.v, ego.psi, ego.lane});
    }
    return out;
}

}  // namespace hrl::mdp
