#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hrl/mdp/action.hpp"
#include "hrl/sim/scene.hpp"

namespace hrl::safety {

enum class SafetyMode { Basic, Robust };

struct SafetyConfig {
    SafetyMode mode = SafetyMode::Robust;
    double horizon = 1.0;         // s, worst-case lookahead
    double psi_max_other = 0.26;  // rad, worst-case neighbor heading
    double eps_den = 0.1;         // m/s^2, guard for the safe-distance denominator
    double margin = 2.0;          // m, additive buffer
    double check_dt = 0.1;        // s, envelope evaluation grid

    bool valid() const {
        return horizon > 0 && eps_den > 0 && margin >= 0 && check_dt > 0 &&
               psi_max_other >= 0;
    }
};

// Longitudinal interval the ego may occupy in a lane without violating the
// safe distance to leader and follower. Bounds are ego-center coordinates.
struct FreeSpace {
    int lane = 0;
    double lower = 0.0;
    double upper = 0.0;
    bool empty = false;
};

// A neighbor from an adjacent lane whose worst-case heading could carry it
// into the queried lane within the horizon.
struct VirtualNeighbor {
    sim::VehicleState vehicle;
    int projected_lane = 0;
};

// Compact per-action verdicts, the part of a mask kept in replay.
struct MaskBits {
    std::array<bool, mdp::kNumActions> safe{};
    std::array<bool, mdp::kNumActions> admissible{};

    bool any_safe() const {
        for (bool s : safe)
            if (s) return true;
        return false;
    }
    int count_safe() const {
        int n = 0;
        for (bool s : safe) n += s ? 1 : 0;
        return n;
    }
    static MaskBits all_safe() {
        MaskBits m;
        m.safe.fill(true);
        m.admissible.fill(true);
        return m;
    }
};

struct SafetyMask {
    MaskBits bits;
    bool fallback = false;  // true when every action failed and one was promoted
    std::array<double, mdp::kNumActions> clearance{};  // min clearance per action, m
    std::vector<FreeSpace> free_spaces;                // static per-lane view
    std::vector<VirtualNeighbor> virtual_neighbors;    // robust mode only
};

// Constant-acceleration position, evaluated no further than the stopping
// time so braking never predicts backward motion.
double predict_position(double p0, double v, double a, double t);

// Speed along the same envelope.
double speed_at(double v, double a, double t);

// Gap buffer from relative speed and the acceleration capabilities of the
// two vehicles; the denominator is guarded and the margin always added.
double safe_distance(double v_other, double v_ego, double a_max_other,
                     double a_max_ego, const SafetyConfig& cfg);

// Static interval between follower and leader envelopes at the current
// instant. Vehicle lengths shift the bounds to bumper clearances; missing
// neighbors clip to the sensing window.
FreeSpace free_space(int lane, const sim::VehicleState& ego,
                     const sim::VehicleState* leader,
                     const sim::VehicleState* follower,
                     const SafetyConfig& cfg, double sensing_range);

// Adjacent-lane vehicles whose worst-case lateral reach crosses a lane
// boundary, projected into that lane. Requires robust mode.
std::vector<VirtualNeighbor> worst_case_merge_set(const sim::Scene& scene,
                                                  const SafetyConfig& cfg);

// Verdict per admissible meta-action: the action is safe iff the predicted
// ego position stays strictly inside the lane's free space at every grid
// instant of the horizon, against leaders at maximum braking and followers
// at maximum acceleration (robust mode adds the virtual merge set). If every
// action fails, the least-bad one is promoted so the mask is never empty.
// Throws std::logic_error when the scene is already colliding.
SafetyMask mask_actions(const sim::Scene& scene, const SafetyConfig& cfg,
                        const mdp::EnvConfig& env);

// Signed worst-case penetration depths (leader side, follower side) of the
// ego's predicted trajectory into the unsafe regions for one action,
// evaluated with basic envelopes. Negative values are slack.
std::array<double, 2> violation_depths(const sim::Scene& scene, mdp::MetaAction a,
                                       const SafetyConfig& cfg,
                                       const mdp::EnvConfig& env);

}  // namespace hrl::safety
