// Command-line front end: train / eval / compare / check-scene.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hrl/harness/compare.hpp"
#include "hrl/harness/config.hpp"
#include "hrl/harness/run.hpp"
#include "hrl/safety/safety.hpp"

namespace {

using hrl::harness::ExperimentConfig;

int cmd_train(const std::string& config_path, std::uint64_t seed,
              const std::string& out_dir) {
    const ExperimentConfig cfg = hrl::harness::load_config(config_path);
    const auto metrics = hrl::harness::run_training(cfg, seed, out_dir);
    int collisions = 0;
    for (const auto& r : metrics.train_rows) collisions += r.collision ? 1 : 0;
    std::cout << "trained " << metrics.train_rows.size() << " episodes, "
              << collisions << " collision episodes, plateau at episode "
              << metrics.plateau_episode << "\n";
    std::cout << "wrote " << out_dir << "/"
              << hrl::harness::train_csv_name(seed) << " and checkpoint\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& ckpt_path,
             int episodes, std::uint64_t seed, const std::string& out_dir) {
    const ExperimentConfig cfg = hrl::harness::load_config(config_path);
    const int n = episodes > 0 ? episodes : cfg.eval_episodes;
    const auto metrics =
        hrl::harness::run_eval_files(cfg, ckpt_path, n, seed, out_dir);
    hrl::harness::write_eval_csv(metrics.eval_rows, std::cout);
    std::cout << "collisions: " << metrics.eval_collisions << "/" << n
              << ", mean reward before collision: "
              << metrics.mean_reward_before_collision << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths,
                const std::string& out_dir, int jobs) {
    std::vector<ExperimentConfig> cfgs;
    for (const auto& p : config_paths) cfgs.push_back(hrl::harness::load_config(p));
    hrl::harness::compare_strategies(cfgs, out_dir, jobs);
    std::cout << "comparison written to " << out_dir << "/summary.txt\n";
    return 0;
}

int cmd_check_scene(const std::string& snapshot_path,
                    const std::string& config_path) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = hrl::harness::load_config(config_path);

    std::ifstream in(snapshot_path);
    if (!in) {
        std::cerr << "cannot open snapshot: " << snapshot_path << "\n";
        return 1;
    }
    const auto scene = hrl::sim::Scene::from_snapshot(in, cfg.sim);
    const auto mask = hrl::safety::mask_actions(scene, cfg.safety, cfg.env);

    std::cout << "mode: "
              << (cfg.safety.mode == hrl::safety::SafetyMode::Robust ? "robust"
                                                                     : "basic")
              << "\n";
    for (const auto& fs : mask.free_spaces) {
        std::cout << "lane " << fs.lane << ": ";
        if (fs.empty)
            std::cout << "empty\n";
        else
            std::cout << "free space (" << fs.lower << ", " << fs.upper << ")\n";
    }
    for (int i = 0; i < hrl::mdp::kNumActions; ++i) {
        const auto a = static_cast<hrl::mdp::MetaAction>(i);
        std::cout << hrl::mdp::action_name(a) << ": ";
        if (!mask.bits.admissible[i])
            std::cout << "inadmissible\n";
        else
            std::cout << (mask.bits.safe[i] ? "safe" : "unsafe")
                      << " (clearance " << mask.clearance[i] << " m)\n";
    }
    if (mask.fallback) std::cout << "fallback: least-bad action promoted\n";
    std::cout << "virtual neighbors: " << mask.virtual_neighbors.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"highway driving MDP with masked deep Q-learning strategies"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "runs", ckpt_path, snapshot_path;
    std::uint64_t seed = 1;
    int episodes = 0, jobs = 2;
    std::vector<std::string> config_paths;

    auto* train = app.add_subcommand("train", "train one strategy for one seed");
    train->add_option("--config", config_path, "experiment config file")->required();
    train->add_option("--seed", seed, "training seed");
    train->add_option("--out", out_dir, "output directory");

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint greedily");
    eval->add_option("--config", config_path, "experiment config file")->required();
    eval->add_option("--checkpoint", ckpt_path, "checkpoint file")->required();
    eval->add_option("--episodes", episodes, "eval episodes (default from config)");
    eval->add_option("--seed", seed, "eval seed");
    eval->add_option("--out", out_dir, "output directory for the eval CSV");

    auto* compare = app.add_subcommand("compare", "train+eval several strategies");
    compare->add_option("--configs", config_paths, "config files")
        ->required()
        ->expected(-2);
    compare->add_option("--out", out_dir, "output directory")->required();
    compare->add_option("--jobs", jobs, "parallel workers");

    auto* check = app.add_subcommand("check-scene", "mask a scene snapshot");
    check->add_option("--snapshot", snapshot_path, "scene snapshot file")->required();
    check->add_option("--config", config_path, "experiment config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(config_path, seed, out_dir);
        if (*eval) return cmd_eval(config_path, ckpt_path, episodes, seed, out_dir);
        if (*compare) return cmd_compare(config_paths, out_dir, jobs);
        if (*check) return cmd_check_scene(snapshot_path, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
