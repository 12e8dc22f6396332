#include "hrl/safety/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrl::safety {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LaneCandidates {
    std::vector<sim::VehicleState> ahead;
    std::vector<sim::VehicleState> behind;
};

// Real occupants keyed by their center-derived lane, plus projected virtual
// neighbors in robust mode. Classification relative to the ego is fixed at
// the decision instant.
std::vector<LaneCandidates> collect_candidates(
    const sim::Scene& scene, const std::vector<VirtualNeighbor>& virtuals,
    bool include_virtual) {
    const sim::SceneConfig& cfg = scene.config();
    const sim::VehicleState& ego = scene.ego();
    std::vector<LaneCandidates> lanes(cfg.road.n_lanes);

    auto add = [&](const sim::VehicleState& v, int lane) {
        if (lane < 0 || lane >= cfg.road.n_lanes) return;
        if (v.x >= ego.x)
            lanes[lane].ahead.push_back(v);
        else
            lanes[lane].behind.push_back(v);
    };

    for (const auto& v : scene.vehicles()) {
        if (v.is_ego) continue;
        if (std::hypot(v.x - ego.x, v.y - ego.y) > cfg.sensing_range) continue;
        add(v, v.lane);
    }
    if (include_virtual) {
        for (const auto& vn : virtuals) add(vn.vehicle, vn.projected_lane);
    }
    return lanes;
}

struct SideClearance {
    double leader = kInf;    // min over the horizon of upper - x_ego
    double follower = kInf;  // min over the horizon of x_ego - lower

    double combined() const { return std::min(leader, follower); }
};

// Half the lateral footprint of the ego body at heading psi.
double lateral_half_extent(const sim::VehicleState& ego, double psi) {
    return 0.5 * (ego.width * std::cos(psi) +
                  ego.length * std::abs(std::sin(psi)));
}

bool occupies_lane(double y, double psi, const sim::VehicleState& ego,
                   const sim::RoadConfig& road, int lane) {
    return std::abs(y - road.lane_center(lane)) <
           0.5 * road.lane_width + lateral_half_extent(ego, psi);
}

struct ActionEval {
    SideClearance full;    // over the whole grid including tau = 0
    SideClearance future;  // over tau > 0 only, the fallback metric
};

// Worst-case envelope check of one action: leaders brake at full a_max,
// followers accelerate at full a_max, the ego follows its control profile.
// Each lane is answerable only while the ego body overlaps it; besides the
// grid knots, the check also evaluates the exact instants the body enters
// or leaves a lane, which the knots alone would straddle. Those instants
// are closed-form because controls and heading are held constant between
// knots.
ActionEval eval_action(const sim::Scene& scene, const SafetyConfig& cfg,
                       const mdp::EnvConfig& env, mdp::MetaAction a,
                       const std::vector<LaneCandidates>& lanes) {
    const sim::SceneConfig& sim_cfg = scene.config();
    const sim::VehicleState& ego = scene.ego();

    const mdp::EgoProfile profile = mdp::apply_meta_action(scene, a, env);
    const double span = std::max(cfg.horizon, env.policy_period);
    const int n_steps = static_cast<int>(std::lround(span / cfg.check_dt));
    const auto traj = mdp::simulate_ego_profile(ego, profile, sim_cfg, n_steps,
                                                cfg.check_dt);

    ActionEval ev;
    auto apply = [&](int lane, double tau, double x_e, double v_e) {
        double upper = ego.x + sim_cfg.sensing_range;
        double lower = ego.x - sim_cfg.sensing_range;
        for (const auto& c : lanes[lane].ahead) {
            const double pos = predict_position(c.x, c.v, -c.a_max, tau);
            const double vc = speed_at(c.v, -c.a_max, tau);
            const double bound = pos - 0.5 * (c.length + ego.length) -
                                 safe_distance(vc, v_e, c.a_max, ego.a_max, cfg);
            upper = std::min(upper, bound);
        }
        for (const auto& c : lanes[lane].behind) {
            const double pos = predict_position(c.x, c.v, c.a_max, tau);
            const double vc = speed_at(c.v, c.a_max, tau);
            const double bound = pos + 0.5 * (c.length + ego.length) +
                                 safe_distance(vc, v_e, c.a_max, ego.a_max, cfg);
            lower = std::max(lower, bound);
        }
        ev.full.leader = std::min(ev.full.leader, upper - x_e);
        ev.full.follower = std::min(ev.full.follower, x_e - lower);
        if (tau > 0.0) {
            ev.future.leader = std::min(ev.future.leader, upper - x_e);
            ev.future.follower = std::min(ev.future.follower, x_e - lower);
        }
    };

    for (int j = 0; j <= n_steps; ++j) {
        const double tau = j * cfg.check_dt;
        for (int lane = 0; lane < sim_cfg.road.n_lanes; ++lane) {
            if (occupies_lane(traj[j].y, traj[j].psi, ego, sim_cfg.road, lane))
                apply(lane, tau, traj[j].x, traj[j].v);
        }
        if (j == n_steps) break;

        // Occupancy transitions inside (tau_j, tau_j+1): knot j's frozen
        // controls give y(t) linear and x(t), v(t) quadratic/linear in the
        // offset, so the crossing instant is exact.
        sim::VehicleState state_j = ego;
        state_j.x = traj[j].x;
        state_j.y = traj[j].y;
        state_j.v = traj[j].v;
        state_j.psi = traj[j].psi;
        state_j.lane = traj[j].lane;
        const double accel_j = profile.control(state_j, sim_cfg, cfg.check_dt).first;
        const double vy = state_j.v * std::sin(state_j.psi);
        if (std::abs(vy) < 1e-12) continue;
        const double thr =
            0.5 * sim_cfg.road.lane_width + lateral_half_extent(ego, state_j.psi);
        for (int lane = 0; lane < sim_cfg.road.n_lanes; ++lane) {
            const bool in_j =
                occupies_lane(traj[j].y, traj[j].psi, ego, sim_cfg.road, lane);
            const bool in_j1 = occupies_lane(traj[j + 1].y, traj[j + 1].psi,
                                             ego, sim_cfg.road, lane);
            if (in_j == in_j1) continue;
            const double c = sim_cfg.road.lane_center(lane);
            // |y_j + vy * s - c| == thr for s in (0, check_dt)
            for (double target : {c - thr, c + thr}) {
                const double s = (target - state_j.y) / vy;
                if (s <= 0.0 || s >= cfg.check_dt) continue;
                double ss = s;
                if (accel_j < 0.0 && state_j.v + accel_j * s < 0.0)
                    ss = state_j.v / -accel_j;
                const double x_t = state_j.x +
                                   state_j.v * std::cos(state_j.psi) * ss +
                                   0.5 * accel_j * std::cos(state_j.psi) * ss * ss;
                const double v_t = std::max(0.0, state_j.v + accel_j * s);
                apply(lane, tau + s, x_t, v_t);
            }
        }
    }
    return ev;
}

// Fallback tie preference: brake first, keep the lane next, steer last.
constexpr std::array<int, mdp::kNumActions> kFallbackRank{
    1,  // Idle
    2,  // LaneRight
    3,  // LaneLeft
    4,  // Faster
    0,  // Slower
};

// A lane change whose target lane holds a vehicle longitudinally overlapping
// the ego body cannot be a fallback pick: steering there is an immediate
// side contact no longitudinal clearance metric can rank.
bool steers_into_occupied_slot(const sim::Scene& scene, mdp::MetaAction a) {
    const sim::VehicleState& ego = scene.ego();
    int target = ego.lane;
    if (a == mdp::MetaAction::LaneLeft) target = ego.lane + 1;
    if (a == mdp::MetaAction::LaneRight) target = ego.lane - 1;
    if (target == ego.lane) return false;
    for (const auto& v : scene.vehicles()) {
        if (v.is_ego || v.lane != target) continue;
        const bool ahead = v.rear_bumper() > ego.front_bumper() + 0.5;
        const bool behind = v.front_bumper() < ego.rear_bumper() - 0.5;
        if (!ahead && !behind) return true;
    }
    return false;
}

}  // namespace

double predict_position(double p0, double v, double a, double t) {
    if (t < 0.0) throw std::invalid_argument("predict_position: t must be >= 0");
    double t_eval = t;
    if (a < 0.0 && v + a * t < 0.0) t_eval = v / -a;
    return p0 + v * t_eval + 0.5 * a * t_eval * t_eval;
}

double speed_at(double v, double a, double t) {
    return std::max(0.0, v + a * t);
}

double safe_distance(double v_other, double v_ego, double a_max_other,
                     double a_max_ego, const SafetyConfig& cfg) {
    const double dv = v_other - v_ego;
    const double denom =
        2.0 * std::max(std::abs(a_max_other) - std::abs(a_max_ego), cfg.eps_den);
    return dv * dv / denom + cfg.margin;
}

FreeSpace free_space(int lane, const sim::VehicleState& ego,
                     const sim::VehicleState* leader,
                     const sim::VehicleState* follower,
                     const SafetyConfig& cfg, double sensing_range) {
    FreeSpace fs;
    fs.lane = lane;
    fs.lower = ego.x - sensing_range;
    fs.upper = ego.x + sensing_range;
    if (leader) {
        fs.upper = leader->x - 0.5 * (leader->length + ego.length) -
                   safe_distance(leader->v, ego.v, leader->a_max, ego.a_max, cfg);
    }
    if (follower) {
        fs.lower = follower->x + 0.5 * (follower->length + ego.length) +
                   safe_distance(follower->v, ego.v, follower->a_max, ego.a_max, cfg);
    }
    fs.empty = !(fs.lower < fs.upper);
    return fs;
}

std::vector<VirtualNeighbor> worst_case_merge_set(const sim::Scene& scene,
                                                  const SafetyConfig& cfg) {
    if (cfg.mode != SafetyMode::Robust)
        throw std::logic_error("worst_case_merge_set: requires robust mode");
    const sim::SceneConfig& sim_cfg = scene.config();
    const sim::VehicleState& ego = scene.ego();

    std::vector<VirtualNeighbor> out;
    for (const auto& v : scene.vehicles()) {
        if (v.is_ego) continue;
        if (std::hypot(v.x - ego.x, v.y - ego.y) > sim_cfg.sensing_range)
            continue;
        const bool ahead = v.rear_bumper() > ego.front_bumper() + 0.5;
        const bool behind = v.front_bumper() < ego.rear_bumper() - 0.5;
        const double reach =
            std::abs(v.v * std::sin(cfg.psi_max_other)) * cfg.horizon;
        for (int dir : {-1, 1}) {
            const int target = v.lane + dir;
            if (target < 0 || target >= sim_cfg.road.n_lanes) continue;
            // A car abreast of the ego cannot merge into the slice of road
            // the ego body occupies; without this exclusion every passing
            // vehicle would veto plain lane keeping. Lanes the ego does not
            // occupy (lane-change targets) keep the full worst case, which
            // covers simultaneous merges from the far side.
            if (!ahead && !behind) {
                const double ego_lat =
                    0.5 * (ego.width * std::cos(ego.psi) +
                           ego.length * std::abs(std::sin(ego.psi)));
                const bool ego_occupies =
                    std::abs(ego.y - sim_cfg.road.lane_center(target)) <
                    0.5 * sim_cfg.road.lane_width + ego_lat;
                if (ego_occupies) continue;
            }
            const double boundary_y =
                (dir > 0 ? v.lane + 1 : v.lane) * sim_cfg.road.lane_width;
            const double lateral_gap = std::abs(boundary_y - v.y);
            if (reach <= lateral_gap) continue;
            VirtualNeighbor vn;
            vn.vehicle = v;
            vn.vehicle.lane = target;
            vn.vehicle.y = sim_cfg.road.lane_center(target);
            vn.projected_lane = target;
            out.push_back(vn);
        }
    }
    return out;
}

SafetyMask mask_actions(const sim::Scene& scene, const SafetyConfig& cfg,
                        const mdp::EnvConfig& env) {
    if (scene.collided())
        throw std::logic_error("mask_actions: scene is already colliding");
    if (!cfg.valid()) throw std::invalid_argument("mask_actions: bad config");

    const sim::SceneConfig& sim_cfg = scene.config();
    const sim::VehicleState& ego = scene.ego();
    const bool robust = cfg.mode == SafetyMode::Robust;

    SafetyMask mask;
    mask.bits.admissible = mdp::admissible_actions(ego, sim_cfg.road, env);
    if (robust) mask.virtual_neighbors = worst_case_merge_set(scene, cfg);

    const auto basic_lanes = collect_candidates(scene, {}, false);
    const auto robust_lanes =
        robust ? collect_candidates(scene, mask.virtual_neighbors, true)
               : basic_lanes;

    std::array<double, mdp::kNumActions> basic_cl{};
    std::array<double, mdp::kNumActions> basic_future{};
    std::array<double, mdp::kNumActions> future{};
    basic_cl.fill(-kInf);
    basic_future.fill(-kInf);
    future.fill(-kInf);
    mask.clearance.fill(-kInf);
    for (int i = 0; i < mdp::kNumActions; ++i) {
        if (!mask.bits.admissible[i]) continue;
        const auto a = static_cast<mdp::MetaAction>(i);
        const ActionEval be = eval_action(scene, cfg, env, a, basic_lanes);
        basic_cl[i] = be.full.combined();
        basic_future[i] = be.future.combined();
        if (robust) {
            const ActionEval re = eval_action(scene, cfg, env, a, robust_lanes);
            mask.clearance[i] = re.full.combined();
            future[i] = re.future.combined();
        } else {
            mask.clearance[i] = basic_cl[i];
            future[i] = basic_future[i];
        }
        mask.bits.safe[i] = mask.clearance[i] > 0.0;
    }

    if (!mask.bits.any_safe()) {
        // Promote the least-bad action. The metric is the clearance over
        // tau > 0 (the tau = 0 term is shared by every action); exact ties
        // break toward braking and lane keeping, and a lane change into a
        // currently occupied slot is never promoted unless nothing else is
        // admissible.
        mask.fallback = true;
        auto better = [&](int i, int pick, const std::array<double, 5>& metric) {
            if (pick < 0) return true;
            const bool i_blocked =
                steers_into_occupied_slot(scene, static_cast<mdp::MetaAction>(i));
            const bool p_blocked = steers_into_occupied_slot(
                scene, static_cast<mdp::MetaAction>(pick));
            if (i_blocked != p_blocked) return p_blocked;
            if (metric[i] != metric[pick]) return metric[i] > metric[pick];
            return kFallbackRank[i] < kFallbackRank[pick];
        };
        int pick = -1;
        if (robust) {
            // Among actions the basic envelopes still accept, take the one
            // with the best robust outlook.
            for (int i = 0; i < mdp::kNumActions; ++i) {
                if (!mask.bits.admissible[i] || basic_cl[i] <= 0.0) continue;
                if (better(i, pick, future)) pick = i;
            }
        }
        if (pick < 0) {
            for (int i = 0; i < mdp::kNumActions; ++i) {
                if (!mask.bits.admissible[i]) continue;
                if (better(i, pick, basic_future)) pick = i;
            }
        }
        mask.bits.safe[pick] = true;
    }

    // Static per-lane report of the current-instant free space.
    for (int lane = 0; lane < sim_cfg.road.n_lanes; ++lane) {
        const sim::VehicleState* leader = nullptr;
        const sim::VehicleState* follower = nullptr;
        for (const auto& c : basic_lanes[lane].ahead)
            if (!leader || c.x < leader->x) leader = &c;
        for (const auto& c : basic_lanes[lane].behind)
            if (!follower || c.x > follower->x) follower = &c;
        mask.free_spaces.push_back(free_space(lane, ego, leader, follower, cfg,
                                              sim_cfg.sensing_range));
    }
    return mask;
}

std::array<double, 2> violation_depths(const sim::Scene& scene, mdp::MetaAction a,
                                       const SafetyConfig& cfg,
                                       const mdp::EnvConfig& env) {
    SafetyConfig basic = cfg;
    basic.mode = SafetyMode::Basic;
    const auto lanes = collect_candidates(scene, {}, false);
    const ActionEval ev = eval_action(scene, basic, env, a, lanes);
    return {-ev.full.leader, -ev.full.follower};
}

}  // namespace hrl::safety
