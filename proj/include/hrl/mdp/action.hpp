#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "hrl/sim/scene.hpp"

namespace hrl::mdp {

// Tactical meta-actions, index order fixed by the action-value vector layout.
enum class MetaAction : int {
    Idle = 0,
    LaneRight = 1,
    LaneLeft = 2,
    Faster = 3,
    Slower = 4,
};

inline constexpr int kNumActions = 5;

std::string_view action_name(MetaAction a);
MetaAction action_from_name(std::string_view name);

struct EnvConfig {
    double policy_period = 1.0;      // s, one decision per period
    double episode_duration = 40.0;  // s
    double delta_v = 5.0;            // m/s, Faster/Slower speed step

    int micro_steps(double dt) const {
        return static_cast<int>(std::lround(policy_period / dt));
    }
};

// Which meta-actions may be issued at all: speed actions are dropped when
// they would leave [v_min, v_max], lane changes at the road edges, Idle never.
std::array<bool, kNumActions> admissible_actions(const sim::VehicleState& ego,
                                                 const sim::RoadConfig& road,
                                                 const EnvConfig& env);

// Closed-loop low-level profile realizing one meta-action over a policy
// period: proportional speed tracking clamped at a_max plus the shared
// lateral lane controller.
struct EgoProfile {
    double v_ref = 0.0;
    int target_lane = 0;

    // Controls for the current micro-step.
    std::pair<double, double> control(const sim::VehicleState& ego,
                                      const sim::SceneConfig& cfg,
                                      double dt) const;
};

// Throws std::logic_error when the action is not admissible.
EgoProfile apply_meta_action(const sim::Scene& scene, MetaAction a,
                             const EnvConfig& env);

struct EgoPose {
    double x, y, v, psi;
    int lane;
};

// Roll the ego alone under a profile for n_steps of dt; element [0] is the
// starting state, so the result has n_steps + 1 entries. Used both by the
// environment executor and by the safety check, which must agree exactly.
std::vector<EgoPose> simulate_ego_profile(sim::VehicleState ego,
                                          const EgoProfile& profile,
                                          const sim::SceneConfig& cfg,
                                          int n_steps, double dt);

}  // namespace hrl::mdp
