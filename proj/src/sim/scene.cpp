#include "hrl/sim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hrl/sim/idm.hpp"
#include "hrl/sim/kinematics.hpp"

namespace hrl::sim {

namespace {

// IDM desired gap for a follower at speed v closing on a leader at dv.
double desired_gap(double v, double dv, const IdmParams& p) {
    return p.s0 +
           std::max(0.0, v * p.T + v * dv / (2.0 * std::sqrt(p.a * p.b_comf)));
}

double bumper_gap(const VehicleState& rear, const VehicleState& front) {
    return front.rear_bumper() - rear.front_bumper();
}

}  // namespace

double lateral_heading_rate(const VehicleState& s, double y_ref, double gain,
                            double psi_max, double dt) {
    const double vy_cap = std::max(0.5, s.v) * std::sin(psi_max);
    const double vy_cmd = std::clamp(gain * (y_ref - s.y), -vy_cap, vy_cap);
    const double psi_des =
        std::asin(std::clamp(vy_cmd / std::max(s.v, 0.5), -1.0, 1.0));
    const double psi_tgt = std::clamp(psi_des, -psi_max, psi_max);
    return (psi_tgt - s.psi) / dt;
}

Scene Scene::initial(const SceneConfig& cfg, std::uint64_t seed) {
    if (!cfg.valid()) throw std::invalid_argument("Scene: invalid config");

    Scene sc;
    sc.cfg_ = cfg;
    sc.rng_.seed(seed);
    auto& rng = sc.rng_;

    std::uniform_int_distribution<int> ego_lane_pick(1, cfg.road.n_lanes - 2);
    VehicleState ego;
    ego.id = 0;
    ego.lane = ego_lane_pick(rng);
    ego.x = 0.0;
    ego.y = cfg.road.lane_center(ego.lane);
    ego.v = cfg.ego_start_speed;
    ego.a_max = cfg.ego_a_max;
    ego.is_ego = true;
    sc.vehicles_.push_back(ego);
    sc.ctls_.push_back({});
    sc.ego_index_ = 0;

    // Evenly slotted ambient traffic with jitter, a clear zone around the
    // ego, and a minimum spacing fix-up pass per lane.
    const int n_lanes = cfg.road.n_lanes;
    std::vector<std::vector<double>> lane_xs(n_lanes);
    const double half = cfg.spawn_half_width;
    std::uniform_real_distribution<double> jitter(0.25, 0.75);
    for (int i = 0; i < cfg.n_ambient; ++i) {
        const int lane = i % n_lanes;
        lane_xs[lane].push_back(0.0);  // slot count first, fill below
    }
    std::uniform_real_distribution<double> v0_draw(cfg.ambient_v0_min,
                                                   cfg.ambient_v0_max);
    std::uniform_real_distribution<double> v_frac(0.95, 1.0);
    std::exponential_distribution<double> look_gap(1.0 / cfg.lc_mean_interval);

    int next_id = 1;
    const double clear_zone = 45.0;
    for (int lane = 0; lane < n_lanes; ++lane) {
        const std::size_t n = lane_xs[lane].size();
        if (n == 0) continue;
        const double slot = 2.0 * half / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k)
            lane_xs[lane][k] = -half + (static_cast<double>(k) + jitter(rng)) * slot;
        // Push slots out of the ego clear zone, then restore spacing.
        for (double& x : lane_xs[lane]) {
            if (std::abs(x) < clear_zone) x = (x >= 0.0) ? clear_zone : -clear_zone;
        }
        std::sort(lane_xs[lane].begin(), lane_xs[lane].end());
        for (std::size_t k = 1; k < n; ++k) {
            lane_xs[lane][k] =
                std::max(lane_xs[lane][k], lane_xs[lane][k - 1] + 25.0);
        }
        for (double x : lane_xs[lane]) {
            VehicleState amb;
            amb.id = next_id++;
            amb.lane = lane;
            amb.x = x;
            amb.y = cfg.road.lane_center(lane);
            amb.a_max = cfg.ambient_a_max;
            AmbientCtl ctl;
            ctl.v0 = v0_draw(rng);
            amb.v = ctl.v0 * v_frac(rng);
            ctl.target_lane = lane;
            ctl.next_look_t = look_gap(rng);
            sc.vehicles_.push_back(amb);
            sc.ctls_.push_back(ctl);
        }
    }

    sc.collisions_ = detect_collisions(sc.vehicles_);
    if (sc.collisions_.any)
        throw std::logic_error("Scene: overlapping vehicles at initialization");
    return sc;
}

const VehicleState* Scene::leader_in_lane(std::size_t self_idx, int lane) const {
    const VehicleState& self = vehicles_[self_idx];
    const VehicleState* best = nullptr;
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
        if (j == self_idx) continue;
        const VehicleState& v = vehicles_[j];
        const bool body_in_lane =
            std::abs(v.y - cfg_.road.lane_center(lane)) <
            0.5 * (cfg_.road.lane_width + v.width);
        const bool heading_there =
            !v.is_ego && ctls_[j].target_lane == lane;
        if (!body_in_lane && !heading_there) continue;
        if (v.x <= self.x) continue;
        if (!best || v.x < best->x) best = &v;
    }
    return best;
}

const VehicleState* Scene::follower_in_lane(std::size_t self_idx, int lane) const {
    const VehicleState& self = vehicles_[self_idx];
    const VehicleState* best = nullptr;
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
        if (j == self_idx) continue;
        const VehicleState& v = vehicles_[j];
        const bool body_in_lane =
            std::abs(v.y - cfg_.road.lane_center(lane)) <
            0.5 * (cfg_.road.lane_width + v.width);
        const bool heading_there =
            !v.is_ego && ctls_[j].target_lane == lane;
        if (!body_in_lane && !heading_there) continue;
        if (v.x > self.x) continue;
        if (!best || v.x > best->x) best = &v;
    }
    return best;
}

void Scene::maybe_start_lane_change(std::size_t i) {
    const VehicleState& self = vehicles_[i];
    AmbientCtl& ctl = ctls_[i];
    std::exponential_distribution<double> look_gap(1.0 / cfg_.lc_mean_interval);
    ctl.next_look_t = t_ + look_gap(rng_);

    // Still finishing the previous maneuver.
    if (std::abs(self.y - cfg_.road.lane_center(ctl.target_lane)) > 0.3) return;

    IdmParams p = cfg_.idm;
    p.v0 = ctl.v0;
    const VehicleState* cur_leader = leader_in_lane(i, ctl.target_lane);
    const double g0 =
        cur_leader ? bumper_gap(self, *cur_leader) : 1e9;
    const bool pressured =
        cur_leader && g0 < desired_gap(self.v, self.v - cur_leader->v, p);

    std::bernoulli_distribution wander(0.15);
    const bool wanders = wander(rng_);
    if (!pressured && !wanders) return;

    int dirs[2] = {1, -1};
    if (std::bernoulli_distribution(0.5)(rng_)) std::swap(dirs[0], dirs[1]);
    for (int dir : dirs) {
        const int target = ctl.target_lane + dir;
        if (target < 0 || target >= cfg_.road.n_lanes) continue;
        const VehicleState* nl = leader_in_lane(i, target);
        const VehicleState* nf = follower_in_lane(i, target);
        const double gl = nl ? bumper_gap(self, *nl) : 1e9;
        const double gf = nf ? bumper_gap(*nf, self) : 1e9;
        const double need_l =
            0.7 * desired_gap(self.v, self.v - (nl ? nl->v : self.v), p);
        const double need_f =
            nf ? 0.7 * desired_gap(nf->v, nf->v - self.v, p) : 0.0;
        const bool better = gl > 1.3 * g0 || !pressured;
        if (gl > std::max(need_l, 8.0) && gf > std::max(need_f, 8.0) && better) {
            ctl.target_lane = target;
            return;
        }
    }
}

void Scene::respawn_if_outside(std::size_t i) {
    VehicleState& self = vehicles_[i];
    const VehicleState& ego = vehicles_[ego_index_];
    if (std::abs(self.x - ego.x) <= cfg_.spawn_half_width) return;

    const bool ahead = self.x < ego.x;  // fell behind, re-enter ahead
    std::uniform_real_distribution<double> pull(0.0, 50.0);
    const double base_x =
        ego.x + (ahead ? 1.0 : -1.0) * (cfg_.spawn_half_width - pull(rng_));

    std::vector<int> lanes(cfg_.road.n_lanes);
    for (int l = 0; l < cfg_.road.n_lanes; ++l) lanes[l] = l;
    std::shuffle(lanes.begin(), lanes.end(), rng_);
    for (int lane : lanes) {
        bool ok = true;
        for (std::size_t j = 0; j < vehicles_.size(); ++j) {
            if (j == i) continue;
            const VehicleState& v = vehicles_[j];
            const bool body_in_lane =
                std::abs(v.y - cfg_.road.lane_center(lane)) <
                0.5 * (cfg_.road.lane_width + v.width);
            const bool heading_there =
                !v.is_ego && ctls_[j].target_lane == lane;
            if (!body_in_lane && !heading_there) continue;
            if (std::abs(v.x - base_x) < 40.0) { ok = false; break; }
        }
        if (!ok) continue;
        AmbientCtl& ctl = ctls_[i];
        self.x = base_x;
        self.lane = lane;
        self.y = cfg_.road.lane_center(lane);
        self.psi = 0.0;
        std::uniform_real_distribution<double> v_frac(0.95, 1.0);
        self.v = ctl.v0 * v_frac(rng_);
        ctl.target_lane = lane;
        return;
    }
    // No slot this step; try again on the next one.
}

void Scene::step(double ego_accel, double ego_heading_rate, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Scene::step: dt must be > 0");

    // Controls from the pre-move state, applied synchronously.
    std::vector<double> accel(vehicles_.size(), 0.0);
    std::vector<double> hrate(vehicles_.size(), 0.0);
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        if (i == ego_index_) {
            accel[i] = std::clamp(ego_accel, -vehicles_[i].a_max,
                                  vehicles_[i].a_max);
            hrate[i] = ego_heading_rate;
            continue;
        }
        const VehicleState& self = vehicles_[i];
        IdmParams p = cfg_.idm;
        p.v0 = ctls_[i].v0;
        double a = idm_acceleration(self, leader_in_lane(i, self.lane), p);
        if (ctls_[i].target_lane != self.lane) {
            a = std::min(a, idm_acceleration(
                                self, leader_in_lane(i, ctls_[i].target_lane), p));
        }
        accel[i] = a;
        hrate[i] = lateral_heading_rate(
            self, cfg_.road.lane_center(ctls_[i].target_lane),
            cfg_.lateral_gain, cfg_.psi_max, dt);
    }

    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        vehicles_[i] = advance_vehicle(vehicles_[i], accel[i], hrate[i], dt,
                                       cfg_.psi_max, cfg_.road);
    }
    t_ += dt;

    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        if (i == ego_index_) continue;
        if (t_ >= ctls_[i].next_look_t) maybe_start_lane_change(i);
        respawn_if_outside(i);
    }

    collisions_ = detect_collisions(vehicles_);
    if (collisions_.any) collided_ = true;
}

std::vector<std::pair<VehicleState, double>> Scene::nearest_neighbors(
    int k) const {
    if (k < 1) throw std::invalid_argument("nearest_neighbors: k must be >= 1");
    const VehicleState& e = ego();
    std::vector<std::pair<VehicleState, double>> out;
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        if (i == ego_index_) continue;
        const double d = std::hypot(vehicles_[i].x - e.x, vehicles_[i].y - e.y);
        if (d <= cfg_.sensing_range) out.emplace_back(vehicles_[i], d);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first.id < b.first.id;
    });
    if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
    return out;
}

void Scene::save_snapshot(std::ostream& out) const {
    out.precision(17);
    for (const auto& v : vehicles_) {
        out << v.id << ' ' << v.x << ' ' << v.y << ' ' << v.v << ' ' << v.psi
            << ' ' << v.lane << ' ' << (v.is_ego ? 1 : 0) << '\n';
    }
}

Scene Scene::from_snapshot(std::istream& in, const SceneConfig& cfg) {
    Scene sc;
    sc.cfg_ = cfg;
    sc.rng_.seed(0);
    std::string line;
    int ego_count = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        VehicleState v;
        int is_ego = 0;
        if (!(ls >> v.id >> v.x >> v.y >> v.v >> v.psi >> v.lane >> is_ego))
            throw std::runtime_error("snapshot: malformed line: " + line);
        v.is_ego = is_ego != 0;
        v.a_max = v.is_ego ? cfg.ego_a_max : cfg.ambient_a_max;
        if (v.is_ego) {
            sc.ego_index_ = sc.vehicles_.size();
            ++ego_count;
        }
        AmbientCtl ctl;
        ctl.v0 = std::clamp(v.v, cfg.ambient_v0_min, cfg.ambient_v0_max);
        ctl.target_lane = v.lane;
        ctl.next_look_t = 1e18;
        sc.vehicles_.push_back(v);
        sc.ctls_.push_back(ctl);
    }
    if (ego_count != 1)
        throw std::runtime_error("snapshot: expected exactly one ego vehicle");
    sc.collisions_ = detect_collisions(sc.vehicles_);
    sc.collided_ = sc.collisions_.any;
    return sc;
}

}  // namespace hrl::sim
