#pragma once

#include <optional>

#include "hrl/sim/vehicle.hpp"

namespace hrl::sim {

// Intelligent Driver Model car-following acceleration. The gap is measured
// bumper to bumper; a non-positive gap returns the emergency value -a_max.
// The result is clamped to [-a_max, a_max] of the follower.
double idm_acceleration(const VehicleState& self,
                        const VehicleState* leader,
                        const IdmParams& p);

}  // namespace hrl::sim
