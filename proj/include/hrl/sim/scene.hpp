#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hrl/sim/collision.hpp"
#include "hrl/sim/vehicle.hpp"

namespace hrl::sim {

struct SceneConfig {
    RoadConfig road;
    IdmParams idm;            // T, s0, a, b_comf, delta shared; v0 drawn per vehicle
    int n_ambient = 49;       // ambient vehicle count (ego excluded)
    double dt = 0.1;          // micro-step, s
    double sensing_range = 100.0;
    double psi_max = 0.26;    // rad, heading clamp for every vehicle
    double ego_a_max = 4.0;
    double ambient_a_max = 6.0;
    double ambient_v0_min = 21.0;
    double ambient_v0_max = 29.0;
    double ego_start_speed = 25.0;
    double spawn_half_width = 600.0;  // m, traffic window around the ego
    double lc_mean_interval = 5.0;    // s, mean time between ambient lane-change looks
    double lateral_gain = 4.0;        // 1/s, lane-keeping proportional gain
    double speed_gain = 5.0;          // 1/s, speed-tracking proportional gain

    bool valid() const {
        return road.valid() && idm.valid() && n_ambient >= 0 && dt > 0 &&
               sensing_range > 0 && psi_max > 0 && ego_a_max > 0 &&
               ambient_a_max > 0 && ambient_v0_min > 0 &&
               ambient_v0_min <= ambient_v0_max && spawn_half_width > sensing_range;
    }
};

// Lateral proportional controller shared by the ego profile executor and the
// ambient lane keepers: commands a heading rate that steers toward y_ref with
// lateral speed capped at v*sin(psi_max).
double lateral_heading_rate(const VehicleState& s, double y_ref, double gain,
                            double psi_max, double dt);

// A seedable, self-contained traffic world. Exactly one ego vehicle; all
// other vehicles follow IDM with occasional gap-accepted lane changes.
class Scene {
  public:
    static Scene initial(const SceneConfig& cfg, std::uint64_t seed);

    // Rebuild a scene from a snapshot (see save_snapshot). Body/limit fields
    // are filled from the config since the snapshot carries pose only.
    static Scene from_snapshot(std::istream& in, const SceneConfig& cfg);

    const SceneConfig& config() const { return cfg_; }
    double time() const { return t_; }
    const std::vector<VehicleState>& vehicles() const { return vehicles_; }
    const VehicleState& ego() const { return vehicles_[ego_index_]; }
    bool collided() const { return collided_; }
    const CollisionReport& last_collisions() const { return collisions_; }

    // Advance every vehicle by dt: ambient under IDM + lane-change control,
    // the ego under the given controls. Sets the collision flag post-move.
    void step(double ego_accel, double ego_heading_rate, double dt);

    // Up to k non-ego vehicles within sensing range, ascending Euclidean
    // distance from the ego, ties broken by id.
    std::vector<std::pair<VehicleState, double>> nearest_neighbors(int k) const;

    // One vehicle per line: id x y v psi lane is_ego
    void save_snapshot(std::ostream& out) const;

    std::mt19937_64& rng() { return rng_; }

  private:
    Scene() = default;

    struct AmbientCtl {
        double v0 = 25.0;          // per-vehicle desired speed
        int target_lane = 0;
        double next_look_t = 0.0;  // next lane-change consideration time
    };

    const VehicleState* leader_in_lane(std::size_t self_idx, int lane) const;
    const VehicleState* follower_in_lane(std::size_t self_idx, int lane) const;
    void maybe_start_lane_change(std::size_t i);
    void respawn_if_outside(std::size_t i);

    SceneConfig cfg_;
    std::vector<VehicleState> vehicles_;
    std::vector<AmbientCtl> ctls_;  // parallel to vehicles_, unused slot for ego
    std::size_t ego_index_ = 0;
    double t_ = 0.0;
    bool collided_ = false;
    CollisionReport collisions_;
    std::mt19937_64 rng_;
};

}  // namespace hrl::sim
