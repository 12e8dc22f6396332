#pragma once

#include <array>

#include "hrl/sim/scene.hpp"

namespace hrl::mdp {

inline constexpr int kNeighborSlots = 4;
inline constexpr int kObsDim = 26;

// State vector: four neighbor slots of (dr_x, dr_y, dv_x, dv_y, psi, flag)
// in ascending distance order, then v_ego and psi_ego. Absent slots are
// zero-filled with flag 0. `normalized` rescales positions by the sensing
// range, velocities by v_max and angles by psi_max for the network input.
struct Observation {
    std::array<double, kObsDim> raw{};
    std::array<double, kObsDim> normalized{};
};

Observation build_observation(const sim::Scene& scene);

}  // namespace hrl::mdp
