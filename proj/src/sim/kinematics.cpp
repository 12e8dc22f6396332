#include "hrl/sim/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace hrl::sim {

VehicleState advance_vehicle(const VehicleState& s, double accel,
                             double heading_rate, double dt, double psi_max,
                             const RoadConfig& road) {
    if (!(dt > 0.0)) throw std::invalid_argument("advance_vehicle: dt must be > 0");
    if (!std::isfinite(accel) || !std::isfinite(heading_rate) ||
        !std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.v) ||
        !std::isfinite(s.psi)) {
        throw std::invalid_argument("advance_vehicle: non-finite input");
    }

    // Integrate the quadratic only up to the stopping time when braking
    // would take the speed through zero.
    double t_move = dt;
    if (accel < 0.0 && s.v + accel * dt < 0.0) t_move = s.v / -accel;

    VehicleState out = s;
    const double c = std::cos(s.psi);
    out.x = s.x + s.v * c * t_move + 0.5 * accel * c * t_move * t_move;
    out.y = s.y + s.v * std::sin(s.psi) * dt;
    out.v = std::max(0.0, s.v + accel * dt);
    out.psi = std::clamp(s.psi + heading_rate * dt, -psi_max, psi_max);
    out.lane = road.lane_of(out.y);
    return out;
}

}  // namespace hrl::sim
