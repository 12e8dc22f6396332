#pragma once

#include <algorithm>
#include <cmath>

namespace hrl::sim {

// Pose and limits of one vehicle in the road frame: x runs along the road,
// y laterally with lane 0 the rightmost lane.
struct VehicleState {
    int id = 0;
    double x = 0.0;       // m
    double y = 0.0;       // m
    double v = 0.0;       // m/s, >= 0
    double psi = 0.0;     // rad, from the road axis
    int lane = 0;
    double length = 5.0;  // m
    double width = 2.0;   // m
    double a_max = 4.0;   // m/s^2, > 0
    bool is_ego = false;

    double front_bumper() const { return x + 0.5 * length; }
    double rear_bumper() const { return x - 0.5 * length; }
};

struct RoadConfig {
    int n_lanes = 4;
    double lane_width = 4.0;  // m
    double length = 10000.0;  // m, open segment
    double v_min = 20.0;      // m/s, ego speed floor
    double v_max = 30.0;      // m/s, ego speed ceiling

    double lane_center(int lane) const { return (lane + 0.5) * lane_width; }

    int lane_of(double y) const {
        const int lane = static_cast<int>(std::floor(y / lane_width));
        return std::clamp(lane, 0, n_lanes - 1);
    }

    bool valid() const {
        return n_lanes >= 2 && lane_width > 0.0 && length > 0.0 && v_min < v_max;
    }
};

struct IdmParams {
    double v0 = 25.0;     // desired speed, m/s
    double T = 1.5;       // desired time headway, s
    double s0 = 2.0;      // jam distance, m
    double a = 3.0;       // max acceleration, m/s^2
    double b_comf = 5.0;  // comfortable deceleration, m/s^2
    double delta = 4.0;

    bool valid() const {
        return v0 > 0 && T > 0 && s0 > 0 && a > 0 && b_comf > 0 && delta >= 1.0;
    }
};

}  // namespace hrl::sim
