#include "hrl/sim/collision.hpp"

#include <array>
#include <cmath>

namespace hrl::sim {

namespace {

struct Box {
    double cx, cy;
    double ux, uy;  // unit axis along the body
    double hl, hw;  // half length, half width

    explicit Box(const VehicleState& s)
        : cx(s.x), cy(s.y), ux(std::cos(s.psi)), uy(std::sin(s.psi)),
          hl(0.5 * s.length), hw(0.5 * s.width) {}

    // Projection radius of the box onto a unit axis (ax, ay).
    double radius(double ax, double ay) const {
        return hl * std::abs(ax * ux + ay * uy) +
               hw * std::abs(-ax * uy + ay * ux);
    }
};

}  // namespace

bool rectangles_overlap(const VehicleState& a, const VehicleState& b) {
    // Broad phase: bounding-circle reject.
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double ra = 0.5 * std::hypot(a.length, a.width);
    const double rb = 0.5 * std::hypot(b.length, b.width);
    if (dx * dx + dy * dy > (ra + rb) * (ra + rb)) return false;

    const Box ba(a), bb(b);
    const std::array<std::array<double, 2>, 4> axes{{
        {ba.ux, ba.uy}, {-ba.uy, ba.ux}, {bb.ux, bb.uy}, {-bb.uy, bb.ux}}};
    for (const auto& ax : axes) {
        const double dist = std::abs(dx * ax[0] + dy * ax[1]);
        if (dist > ba.radius(ax[0], ax[1]) + bb.radius(ax[0], ax[1]))
            return false;
    }
    return true;
}

CollisionReport detect_collisions(const std::vector<VehicleState>& vehicles) {
    CollisionReport report;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
            if (rectangles_overlap(vehicles[i], vehicles[j])) {
                report.any = true;
                report.pairs.emplace_back(vehicles[i].id, vehicles[j].id);
            }
        }
    }
    return report;
}

}  // namespace hrl::sim
