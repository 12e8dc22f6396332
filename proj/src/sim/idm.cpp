#include "hrl/sim/idm.hpp"

#include <cmath>

namespace hrl::sim {

double idm_acceleration(const VehicleState& self,
                        const VehicleState* leader,
                        const IdmParams& p) {
    const double free_term = std::pow(self.v / p.v0, p.delta);
    double interaction = 0.0;
    if (leader) {
        const double gap = leader->rear_bumper() - self.front_bumper();
        if (gap <= 0.0) return -self.a_max;
        const double dv = self.v - leader->v;  // > 0 when closing
        const double s_star =
            p.s0 + std::max(0.0, self.v * p.T +
                                     self.v * dv / (2.0 * std::sqrt(p.a * p.b_comf)));
        interaction = (s_star / gap) * (s_star / gap);
    }
    const double a = p.a * (1.0 - free_term - interaction);
    return std::clamp(a, -self.a_max, self.a_max);
}

}  // namespace hrl::sim
