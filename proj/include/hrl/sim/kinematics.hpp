#pragma once

#include "hrl/sim/vehicle.hpp"

namespace hrl::sim {

// One explicit integration step of the point-mass bicycle abstraction.
// Longitudinal motion follows the constant-acceleration law evaluated no
// further than the stopping time (speed never goes negative); lateral motion
// is v*sin(psi). The heading command is applied after the move and clamped
// to [-psi_max, psi_max]; the lane index is re-derived from the new lateral
// position. Throws std::invalid_argument on non-finite input or dt <= 0.
VehicleState advance_vehicle(const VehicleState& s, double accel,
                             double heading_rate, double dt, double psi_max,
                             const RoadConfig& road);

}  // namespace hrl::sim
