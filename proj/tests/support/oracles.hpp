// Test-only oracles, independent of the implementation paths they check.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hrl/sim/idm.hpp"
#include "hrl/sim/vehicle.hpp"

namespace oracles {

// Equilibrium following gap: bisect the bumper gap until the IDM
// acceleration at equal speeds vanishes.
inline double idm_equilibrium_gap(const hrl::sim::IdmParams& p, double v) {
    hrl::sim::VehicleState self;
    self.v = v;
    self.a_max = 1e9;  // no clamp, probe the raw law
    hrl::sim::VehicleState leader;
    leader.v = v;

    auto accel_at = [&](double gap) {
        leader.x = self.front_bumper() + gap + 0.5 * leader.length;
        return hrl::sim::idm_acceleration(self, &leader, p);
    };
    double lo = 1e-3, hi = 1e4;
    if (accel_at(lo) > 0.0 || accel_at(hi) < 0.0)
        throw std::logic_error("idm_equilibrium_gap: no bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double a = accel_at(mid);
        if (std::abs(a) < 1e-12) return mid;
        (a < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline bool point_in_rect(double px, double py, const hrl::sim::VehicleState& r) {
    const double dx = px - r.x;
    const double dy = py - r.y;
    const double c = std::cos(r.psi), s = std::sin(r.psi);
    const double lx = dx * c + dy * s;
    const double ly = -dx * s + dy * c;
    return std::abs(lx) <= 0.5 * r.length && std::abs(ly) <= 0.5 * r.width;
}

// Overlap by 1 cm perimeter sampling plus mutual center containment (covers
// the nested-rectangle case, since the rectangles are convex).
inline bool rect_overlap_sampled(const hrl::sim::VehicleState& a,
                                 const hrl::sim::VehicleState& b) {
    if (point_in_rect(a.x, a.y, b) || point_in_rect(b.x, b.y, a)) return true;
    auto perimeter_hits = [&](const hrl::sim::VehicleState& from,
                              const hrl::sim::VehicleState& into) {
        const double c = std::cos(from.psi), s = std::sin(from.psi);
        const double hl = 0.5 * from.length, hw = 0.5 * from.width;
        const double step = 0.01;
        for (double t = -hl; t <= hl; t += step) {
            for (double w : {-hw, hw}) {
                const double px = from.x + t * c - w * s;
                const double py = from.y + t * s + w * c;
                if (point_in_rect(px, py, into)) return true;
            }
        }
        for (double t = -hw; t <= hw; t += step) {
            for (double l : {-hl, hl}) {
                const double px = from.x + l * c - t * s;
                const double py = from.y + l * s + t * c;
                if (point_in_rect(px, py, into)) return true;
            }
        }
        return false;
    };
    return perimeter_hits(a, b) || perimeter_hits(b, a);
}

}  // namespace oracles
