#include "hrl/mdp/observation.hpp"

#include <algorithm>
#include <cmath>

namespace hrl::mdp {

Observation build_observation(const sim::Scene& scene) {
    const sim::SceneConfig& cfg = scene.config();
    const sim::VehicleState& ego = scene.ego();
    const auto neighbors = scene.nearest_neighbors(kNeighborSlots);

    Observation obs;
    const double ego_vx = ego.v * std::cos(ego.psi);
    const double ego_vy = ego.v * std::sin(ego.psi);
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const sim::VehicleState& n = neighbors[i].first;
        const std::size_t base = 6 * i;
        obs.raw[base + 0] = n.x - ego.x;
        obs.raw[base + 1] = n.y - ego.y;
        obs.raw[base + 2] = n.v * std::cos(n.psi) - ego_vx;
        obs.raw[base + 3] = n.v * std::sin(n.psi) - ego_vy;
        obs.raw[base + 4] = n.psi;
        obs.raw[base + 5] = 1.0;
    }
    obs.raw[24] = ego.v;
    obs.raw[25] = ego.psi;

    const double pos_scale = 1.0 / cfg.sensing_range;
    const double vel_scale = 1.0 / cfg.road.v_max;
    const double ang_scale = 1.0 / cfg.psi_max;
    for (int i = 0; i < kNeighborSlots; ++i) {
        const int base = 6 * i;
        obs.normalized[base + 0] = obs.raw[base + 0] * pos_scale;
        obs.normalized[base + 1] = obs.raw[base + 1] * pos_scale;
        obs.normalized[base + 2] = obs.raw[base + 2] * vel_scale;
        obs.normalized[base + 3] = obs.raw[base + 3] * vel_scale;
        obs.normalized[base + 4] = obs.raw[base + 4] * ang_scale;
        obs.normalized[base + 5] = obs.raw[base + 5];
    }
    obs.normalized[24] = obs.raw[24] * vel_scale;
    obs.normalized[25] = obs.raw[25] * ang_scale;
    for (double& z : obs.normalized) z = std::clamp(z, -1.0, 1.0);
    return obs;
}

}  // namespace hrl::mdp
