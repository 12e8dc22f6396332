#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hrl/mdp/env.hpp"

using namespace hrl;

namespace {

sim::Scene scene_from(const std::string& snapshot,
                      const sim::SceneConfig& cfg = {}) {
    std::istringstream in(snapshot);
    return sim::Scene::from_snapshot(in, cfg);
}

mdp::HighwayEnv make_env(sim::SceneConfig sim_cfg = {},
                         mdp::RewardConfig reward = {}) {
    return mdp::HighwayEnv(sim_cfg, mdp::EnvConfig{}, reward);
}

}  // namespace

TEST_CASE("observation of an empty road") {
    sim::SceneConfig cfg;
    cfg.n_ambient = 0;
    auto scene = sim::Scene::initial(cfg, 1);
    const auto obs = mdp::build_observation(scene);
    CHECK(obs.raw.size() == 26);
    for (int slot = 0; slot < 4; ++slot) {
        for (int j = 0; j < 6; ++j) CHECK(obs.raw[6 * slot + j] == 0.0);
    }
    CHECK(obs.raw[24] == doctest::Approx(cfg.ego_start_speed));
    CHECK(obs.raw[25] == 0.0);
    CHECK(obs.normalized[24] == doctest::Approx(cfg.ego_start_speed / 30.0));
}

TEST_CASE("observation of a single leader") {
    auto scene = scene_from(
        "0 0 6 25 0 1 1\n"
        "1 30 6 25 0 1 0\n");
    const auto obs = mdp::build_observation(scene);
    CHECK(obs.raw[0] == doctest::Approx(30.0));  // dr_x
    CHECK(obs.raw[1] == doctest::Approx(0.0));   // dr_y
    CHECK(obs.raw[2] == doctest::Approx(0.0));   // dv_x
    CHECK(obs.raw[3] == doctest::Approx(0.0));   // dv_y
    CHECK(obs.raw[4] == 0.0);                    // psi
    CHECK(obs.raw[5] == 1.0);                    // flag
    for (int slot = 1; slot < 4; ++slot)
        for (int j = 0; j < 6; ++j) CHECK(obs.raw[6 * slot + j] == 0.0);
}

TEST_CASE("observation invariants under fuzz") {
    sim::SceneConfig cfg;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto scene = sim::Scene::initial(cfg, seed);
        for (int step = 0; step < 20; ++step) scene.step(0.0, 0.0, cfg.dt);
        const auto obs = mdp::build_observation(scene);
        for (int slot = 0; slot < 4; ++slot) {
            const int base = 6 * slot;
            if (obs.raw[base + 5] == 0.0) {
                for (int j = 0; j < 6; ++j) CHECK(obs.raw[base + j] == 0.0);
            }
        }
        for (double z : obs.normalized) {
            CHECK(z >= -1.0);
            CHECK(z <= 1.0);
            CHECK(std::isfinite(z));
        }
    }
}

TEST_CASE("admissible actions respect bounds") {
    mdp::EnvConfig env;
    sim::RoadConfig road;
    sim::VehicleState ego;
    ego.v = road.v_max;
    ego.lane = 1;

    auto ok = mdp::admissible_actions(ego, road, env);
    CHECK(ok[static_cast<int>(mdp::MetaAction::Idle)]);
    CHECK(ok[static_cast<int>(mdp::MetaAction::LaneRight)]);
    CHECK(ok[static_cast<int>(mdp::MetaAction::LaneLeft)]);
    CHECK_FALSE(ok[static_cast<int>(mdp::MetaAction::Faster)]);
    CHECK(ok[static_cast<int>(mdp::MetaAction::Slower)]);

    ego.lane = 0;
    ego.v = 25.0;
    ok = mdp::admissible_actions(ego, road, env);
    CHECK_FALSE(ok[static_cast<int>(mdp::MetaAction::LaneRight)]);

    ego.v = road.v_min;
    ego.lane = road.n_lanes - 1;
    ok = mdp::admissible_actions(ego, road, env);
    CHECK(ok[static_cast<int>(mdp::MetaAction::Idle)]);
    CHECK(ok[static_cast<int>(mdp::MetaAction::LaneRight)]);
    CHECK_FALSE(ok[static_cast<int>(mdp::MetaAction::LaneLeft)]);
    CHECK(ok[static_cast<int>(mdp::MetaAction::Faster)]);
    CHECK_FALSE(ok[static_cast<int>(mdp::MetaAction::Slower)]);

    // Idle is always available.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> speed(road.v_min, road.v_max);
    for (int i = 0; i < 1000; ++i) {
        ego.v = speed(rng);
        ego.lane = static_cast<int>(rng() % road.n_lanes);
        ok = mdp::admissible_actions(ego, road, env);
        CHECK(ok[static_cast<int>(mdp::MetaAction::Idle)]);
    }
}

TEST_CASE("meta-action profiles") {
    mdp::EnvConfig env;
    sim::SceneConfig cfg;

    SUBCASE("idle at lane center on speed is a fixed point") {
        auto scene = scene_from("0 0 6 25 0 1 1\n");
        const auto profile =
            mdp::apply_meta_action(scene, mdp::MetaAction::Idle, env);
        const auto [accel, hrate] = profile.control(scene.ego(), cfg, cfg.dt);
        CHECK(accel == doctest::Approx(0.0));
        CHECK(hrate == doctest::Approx(0.0));
    }

    SUBCASE("faster is rate limited by a_max") {
        auto scene = scene_from("0 0 6 25 0 1 1\n");
        const auto profile =
            mdp::apply_meta_action(scene, mdp::MetaAction::Faster, env);
        const auto traj =
            mdp::simulate_ego_profile(scene.ego(), profile, cfg, 10, cfg.dt);
        CHECK(traj.back().v == doctest::Approx(29.0).epsilon(1e-6));
    }

    SUBCASE("lane change completes within the policy period") {
        auto scene = scene_from("0 0 6 25 0 1 1\n");
        const auto profile =
            mdp::apply_meta_action(scene, mdp::MetaAction::LaneLeft, env);
        const auto traj =
            mdp::simulate_ego_profile(scene.ego(), profile, cfg, 10, cfg.dt);
        CHECK(traj.back().lane == 2);
        CHECK(std::abs(traj.back().y - cfg.road.lane_center(2)) < 0.2);
        for (const auto& p : traj) CHECK(std::abs(p.psi) <= cfg.psi_max + 1e-12);
    }

    SUBCASE("inadmissible action is rejected") {
        auto scene = scene_from("0 0 2 25 0 0 1\n");  // rightmost lane
        CHECK_THROWS_AS(
            mdp::apply_meta_action(scene, mdp::MetaAction::LaneRight, env),
            std::logic_error);
    }
}

TEST_CASE("reward functions") {
    mdp::RewardConfig cfg;  // b=1, c=10
    sim::RoadConfig road;   // v in [20, 30]
    CHECK(mdp::reward_traditional(20.0, false, cfg, road) == doctest::Approx(0.0));
    CHECK(mdp::reward_traditional(30.0, false, cfg, road) == doctest::Approx(1.0));
    CHECK(mdp::reward_traditional(25.0, true, cfg, road) == doctest::Approx(-9.5));
    CHECK(mdp::reward_speed(20.0, cfg, road) == doctest::Approx(0.0));
    CHECK(mdp::reward_speed(30.0, cfg, road) == doctest::Approx(1.0));
    CHECK(mdp::reward_speed(27.5, cfg, road) == doctest::Approx(0.75));

    // Monotone in v; drops by exactly c on collision.
    double prev = -1.0;
    for (double v = road.v_min; v <= road.v_max; v += 0.5) {
        const double r = mdp::reward_traditional(v, false, cfg, road);
        CHECK(r >= prev);
        prev = r;
        const double rc = mdp::reward_traditional(v, true, cfg, road);
        CHECK(r - rc == doctest::Approx(cfg.c));
    }
}

TEST_CASE("environment episode mechanics") {
    SUBCASE("reset is deterministic") {
        auto env = make_env();
        const auto a = env.reset(7);
        const auto b = env.reset(7);
        CHECK(a.raw == b.raw);
    }

    SUBCASE("an uneventful episode lasts exactly 40 policy steps") {
        sim::SceneConfig cfg;
        cfg.n_ambient = 0;
        auto env = make_env(cfg);
        env.reset(3);
        int steps = 0;
        while (!env.terminal()) {
            const auto res = env.step(mdp::MetaAction::Idle);
            ++steps;
            CHECK_FALSE(res.info.collision);
        }
        CHECK(steps == 40);
        CHECK_THROWS_AS(env.step(mdp::MetaAction::Idle), std::logic_error);
    }

    SUBCASE("a forced head-on ends the episode on step one") {
        auto env = make_env();
        env.reset_scene(scene_from(
            "0 0 2 30 0 0 1\n"
            "1 12 2 0 0 0 0\n"));  // stopped wall just ahead
        const auto res = env.step(mdp::MetaAction::Idle);
        CHECK(res.terminal);
        CHECK(res.info.collision);
        CHECK(res.reward < 0.0);  // collision penalty dominates
    }

    SUBCASE("episodes are reproducible under a fixed policy") {
        auto env1 = make_env();
        auto env2 = make_env();
        env1.reset(11);
        env2.reset(11);
        for (int i = 0; i < 40 && !env1.terminal(); ++i) {
            const auto a = env1.step(mdp::MetaAction::Idle);
            const auto b = env2.step(mdp::MetaAction::Idle);
            CHECK(a.reward == b.reward);
            CHECK(a.obs.raw == b.obs.raw);
            CHECK(a.terminal == b.terminal);
            if (a.terminal) break;
        }
    }
}
