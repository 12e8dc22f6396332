#include "hrl/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hrl::harness {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::runtime_error("config: " + key + ": " + what);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(x)) throw std::exception();
        return x;
    } catch (...) {
        fail(key, "expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x)) fail(key, "expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::vector<std::uint64_t> to_seed_list(const std::string& key,
                                        const std::string& v) {
    std::istringstream ss(v);
    std::vector<std::uint64_t> out;
    std::uint64_t s;
    while (ss >> s) out.push_back(s);
    std::string rest;
    if (ss.fail() && !ss.eof()) fail(key, "expected whitespace-separated seeds");
    if (out.empty()) fail(key, "seed list must be non-empty");
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::set<std::string> seen;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> keys = {
        {"strategy", [&](const std::string& k, const std::string& v) {
             try { cfg.strategy = rl::strategy_from_name(v); }
             catch (const std::exception& e) { fail(k, e.what()); }
         }},
        {"seeds", [&](const std::string& k, const std::string& v) {
             cfg.seeds = to_seed_list(k, v);
         }},
        {"eval_episodes", [&](const std::string& k, const std::string& v) {
             cfg.eval_episodes = to_int(k, v);
         }},
        {"road.n_lanes", [&](const std::string& k, const std::string& v) {
             cfg.sim.road.n_lanes = to_int(k, v);
         }},
        {"road.lane_width", [&](const std::string& k, const std::string& v) {
             cfg.sim.road.lane_width = to_double(k, v);
         }},
        {"road.length", [&](const std::string& k, const std::string& v) {
             cfg.sim.road.length = to_double(k, v);
         }},
        {"road.v_min", [&](const std::string& k, const std::string& v) {
             cfg.sim.road.v_min = to_double(k, v);
         }},
        {"road.v_max", [&](const std::string& k, const std::string& v) {
             cfg.sim.road.v_max = to_double(k, v);
         }},
        {"sim.n_ambient", [&](const std::string& k, const std::string& v) {
             cfg.sim.n_ambient = to_int(k, v);
         }},
        {"sim.dt", [&](const std::string& k, const std::string& v) {
             cfg.sim.dt = to_double(k, v);
         }},
        {"sim.sensing_range", [&](const std::string& k, const std::string& v) {
             cfg.sim.sensing_range = to_double(k, v);
         }},
        {"sim.psi_max", [&](const std::string& k, const std::string& v) {
             cfg.sim.psi_max = to_double(k, v);
         }},
        {"sim.ego_a_max", [&](const std::string& k, const std::string& v) {
             cfg.sim.ego_a_max = to_double(k, v);
         }},
        {"sim.ambient_a_max", [&](const std::string& k, const std::string& v) {
             cfg.sim.ambient_a_max = to_double(k, v);
         }},
        {"sim.ambient_v0_min", [&](const std::string& k, const std::string& v) {
             cfg.sim.ambient_v0_min = to_double(k, v);
         }},
        {"sim.ambient_v0_max", [&](const std::string& k, const std::string& v) {
             cfg.sim.ambient_v0_max = to_double(k, v);
         }},
        {"sim.ego_start_speed", [&](const std::string& k, const std::string& v) {
             cfg.sim.ego_start_speed = to_double(k, v);
         }},
        {"sim.spawn_half_width", [&](const std::string& k, const std::string& v) {
             cfg.sim.spawn_half_width = to_double(k, v);
         }},
        {"sim.lc_mean_interval", [&](const std::string& k, const std::string& v) {
             cfg.sim.lc_mean_interval = to_double(k, v);
         }},
        {"idm.T", [&](const std::string& k, const std::string& v) {
             cfg.sim.idm.T = to_double(k, v);
         }},
        {"idm.s0", [&](const std::string& k, const std::string& v) {
             cfg.sim.idm.s0 = to_double(k, v);
         }},
        {"idm.a", [&](const std::string& k, const std::string& v) {
             cfg.sim.idm.a = to_double(k, v);
         }},
        {"idm.b_comf", [&](const std::string& k, const std::string& v) {
             cfg.sim.idm.b_comf = to_double(k, v);
         }},
        {"idm.delta", [&](const std::string& k, const std::string& v) {
             cfg.sim.idm.delta = to_double(k, v);
         }},
        {"env.policy_period", [&](const std::string& k, const std::string& v) {
             cfg.env.policy_period = to_double(k, v);
         }},
        {"env.episode_duration", [&](const std::string& k, const std::string& v) {
             cfg.env.episode_duration = to_double(k, v);
         }},
        {"env.delta_v", [&](const std::string& k, const std::string& v) {
             cfg.env.delta_v = to_double(k, v);
         }},
        {"reward.b", [&](const std::string& k, const std::string& v) {
             cfg.reward.b = to_double(k, v);
         }},
        {"reward.c", [&](const std::string& k, const std::string& v) {
             cfg.reward.c = to_double(k, v);
         }},
        {"reward.mode", [&](const std::string& k, const std::string& v) {
             if (v == "traditional") cfg.reward.mode = mdp::RewardMode::Traditional;
             else if (v == "speed_only") cfg.reward.mode = mdp::RewardMode::SpeedOnly;
             else fail(k, "expected 'traditional' or 'speed_only'");
         }},
        {"safety.mode", [&](const std::string& k, const std::string& v) {
             if (v == "basic") cfg.safety.mode = safety::SafetyMode::Basic;
             else if (v == "robust") cfg.safety.mode = safety::SafetyMode::Robust;
             else fail(k, "expected 'basic' or 'robust'");
         }},
        {"safety.horizon", [&](const std::string& k, const std::string& v) {
             cfg.safety.horizon = to_double(k, v);
         }},
        {"safety.psi_max_other", [&](const std::string& k, const std::string& v) {
             cfg.safety.psi_max_other = to_double(k, v);
         }},
        {"safety.eps_den", [&](const std::string& k, const std::string& v) {
             cfg.safety.eps_den = to_double(k, v);
         }},
        {"safety.margin", [&](const std::string& k, const std::string& v) {
             cfg.safety.margin = to_double(k, v);
         }},
        {"train.gamma", [&](const std::string& k, const std::string& v) {
             cfg.train.gamma = to_double(k, v);
         }},
        {"train.alpha", [&](const std::string& k, const std::string& v) {
             cfg.train.adam.alpha = to_double(k, v);
         }},
        {"train.batch_size", [&](const std::string& k, const std::string& v) {
             cfg.train.batch_size = to_int(k, v);
         }},
        {"train.buffer_capacity", [&](const std::string& k, const std::string& v) {
             cfg.train.buffer_capacity = to_int(k, v);
         }},
        {"train.episodes", [&](const std::string& k, const std::string& v) {
             cfg.train.episodes = to_int(k, v);
         }},
        {"train.iterations", [&](const std::string& k, const std::string& v) {
             cfg.train.iterations_per_update = to_int(k, v);
         }},
        {"train.eps_start", [&](const std::string& k, const std::string& v) {
             cfg.train.eps.eps_start = to_double(k, v);
         }},
        {"train.eps_end", [&](const std::string& k, const std::string& v) {
             cfg.train.eps.eps_end = to_double(k, v);
         }},
        {"train.eps_decay_episodes", [&](const std::string& k, const std::string& v) {
             cfg.train.eps.decay_episodes = to_int(k, v);
         }},
        {"constrained.eta", [&](const std::string& k, const std::string& v) {
             cfg.train.constrained.eta = to_double(k, v);
         }},
        {"constrained.bound_leader", [&](const std::string& k, const std::string& v) {
             cfg.train.constrained.bounds[0] = to_double(k, v);
         }},
        {"constrained.bound_follower", [&](const std::string& k, const std::string& v) {
             cfg.train.constrained.bounds[1] = to_double(k, v);
         }},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end()) fail(key, "unknown key");
        if (!seen.insert(key).second) fail(key, "duplicate key");
        it->second(key, value);
    }

    cfg.train.strategy = cfg.strategy;

    // Feasible-return box from the reward scale: per-step rewards lie in
    // [-c, b] (speed-only modes never go below 0 - constraint penalties get
    // extra headroom), and an episode has at most duration/period steps.
    {
        const double steps =
            cfg.env.episode_duration / cfg.env.policy_period;
        const double horizon =
            cfg.train.gamma < 1.0
                ? (1.0 - std::pow(cfg.train.gamma, steps)) / (1.0 - cfg.train.gamma)
                : steps;
        cfg.train.target_ceil = 1.1 * cfg.reward.b * horizon + 1.0;
        cfg.train.target_floor = -(1.1 * cfg.reward.c + 20.0);
    }

    // Strategy-derived defaults for fields the file left unset.
    if (!seen.count("reward.mode")) {
        cfg.reward.mode = cfg.strategy == rl::Strategy::Traditional
                              ? mdp::RewardMode::Traditional
                              : mdp::RewardMode::SpeedOnly;
    }
    if (!seen.count("safety.mode")) {
        cfg.safety.mode = cfg.strategy == rl::Strategy::RobustQMask
                              ? safety::SafetyMode::Robust
                              : safety::SafetyMode::Basic;
    }

    // Cross-field consistency.
    if (cfg.strategy == rl::Strategy::QMask &&
        cfg.safety.mode != safety::SafetyMode::Basic)
        fail("safety.mode", "strategy 'qmask' requires basic mode");
    if (cfg.strategy == rl::Strategy::RobustQMask &&
        cfg.safety.mode != safety::SafetyMode::Robust)
        fail("safety.mode", "strategy 'robust_qmask' requires robust mode");
    if (cfg.train.gamma < 0.0 || cfg.train.gamma > 1.0)
        fail("train.gamma", "must lie in [0, 1]");
    if (cfg.train.batch_size < 1) fail("train.batch_size", "must be >= 1");
    if (static_cast<std::size_t>(cfg.train.batch_size) > cfg.train.buffer_capacity)
        fail("train.batch_size", "must not exceed train.buffer_capacity");
    if (cfg.train.episodes < 0) fail("train.episodes", "must be >= 0");
    if (cfg.eval_episodes < 0) fail("eval_episodes", "must be >= 0");
    if (!cfg.reward.valid()) fail("reward.b", "requires b > 0 and c >= 0");
    if (!cfg.safety.valid()) fail("safety.horizon", "invalid safety settings");
    if (!cfg.sim.valid()) fail("sim", "invalid simulation settings");
    if (!cfg.train.valid()) fail("train", "invalid training settings");
    {
        const double ratio = cfg.env.policy_period / cfg.sim.dt;
        if (std::abs(ratio - std::lround(ratio)) > 1e-9)
            fail("env.policy_period", "must be a multiple of sim.dt");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

bool same_environment(const ExperimentConfig& a, const ExperimentConfig& b) {
    const auto& ra = a.sim.road;
    const auto& rb = b.sim.road;
    return ra.n_lanes == rb.n_lanes && ra.lane_width == rb.lane_width &&
           ra.v_min == rb.v_min && ra.v_max == rb.v_max &&
           a.sim.n_ambient == b.sim.n_ambient && a.sim.dt == b.sim.dt &&
           a.sim.sensing_range == b.sim.sensing_range &&
           a.sim.psi_max == b.sim.psi_max &&
           a.sim.ego_a_max == b.sim.ego_a_max &&
           a.sim.ambient_a_max == b.sim.ambient_a_max &&
           a.env.policy_period == b.env.policy_period &&
           a.env.episode_duration == b.env.episode_duration &&
           a.env.delta_v == b.env.delta_v && a.reward.b == b.reward.b;
}

}  // namespace hrl::harness
