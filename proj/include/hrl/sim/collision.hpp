#pragma once

#include <utility>
#include <vector>

#include "hrl/sim/vehicle.hpp"

namespace hrl::sim {

// Oriented-rectangle overlap test (separating axis, 2D).
bool rectangles_overlap(const VehicleState& a, const VehicleState& b);

struct CollisionReport {
    bool any = false;
    std::vector<std::pair<int, int>> pairs;  // colliding vehicle id pairs
};

CollisionReport detect_collisions(const std::vector<VehicleState>& vehicles);

}  // namespace hrl::sim
