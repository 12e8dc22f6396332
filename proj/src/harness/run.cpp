#include "hrl/harness/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hrl::harness {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

mdp::HighwayEnv make_env(const ExperimentConfig& cfg) {
    return mdp::HighwayEnv(cfg.sim, cfg.env, cfg.reward);
}

}  // namespace

int plateau_episode(const std::vector<double>& rewards, int window, double frac) {
    if (rewards.empty()) return -1;
    const int n = static_cast<int>(rewards.size());
    auto moving_avg = [&](int e) {
        const int lo = std::max(0, e - window + 1);
        double s = 0.0;
        for (int i = lo; i <= e; ++i) s += rewards[i];
        return s / (e - lo + 1);
    };
    const double final_ma = moving_avg(n - 1);
    const double threshold = frac * final_ma;
    for (int e = 0; e < n; ++e) {
        if (moving_avg(e) >= threshold) return e;
    }
    return n - 1;
}

std::string train_csv_name(std::uint64_t seed) {
    return "train_seed" + std::to_string(seed) + ".csv";
}
std::string train_meta_name(std::uint64_t seed) {
    return "train_meta_seed" + std::to_string(seed) + ".csv";
}
std::string eval_csv_name(std::uint64_t seed) {
    return "eval_seed" + std::to_string(seed) + ".csv";
}
std::string checkpoint_name(std::uint64_t seed) {
    return "ckpt_seed" + std::to_string(seed) + ".txt";
}

void write_train_csv(const ExperimentConfig& cfg,
                     const std::vector<rl::EpisodeLog>& rows,
                     std::ostream& out) {
    const bool constrained = cfg.strategy == rl::Strategy::Constrained;
    out << "episode,epsilon,total_reward,steps,collision,loss_mean,q_drift";
    if (constrained) out << ",lambda_norm";
    out << '\n';
    for (const auto& r : rows) {
        out << r.episode << ',' << fmt(r.epsilon) << ',' << fmt(r.total_reward)
            << ',' << r.steps << ',' << (r.collision ? 1 : 0) << ','
            << fmt(r.loss_mean) << ',' << fmt(r.q_drift);
        if (constrained) out << ',' << fmt(r.lambda_norm);
        out << '\n';
    }
}

void write_eval_csv(const std::vector<EvalEpisodeRow>& rows, std::ostream& out) {
    out << "episode,total_reward,steps,collision,time_to_collision,"
           "reward_before_collision\n";
    for (const auto& r : rows) {
        out << r.episode << ',' << fmt(r.total_reward) << ',' << r.steps << ','
            << (r.collision ? 1 : 0) << ',';
        if (r.time_to_collision)
            out << fmt(*r.time_to_collision);
        else
            out << '-';
        out << ',' << fmt(r.reward_before_collision) << '\n';
    }
}

RunMetrics run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                        const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    mdp::HighwayEnv env = make_env(cfg);
    rl::Agent agent(cfg.train, rl::mix_seed(seed, rl::kNetStream, 0));
    rl::Trainer trainer({cfg.train, cfg.safety}, env, agent, seed);

    RunMetrics metrics;
    metrics.train_rows = trainer.run_all();
    if (!agent.net().finite())
        throw std::runtime_error("run_training: non-finite network state");

    {
        std::ofstream out(fs::path(out_dir) / train_csv_name(seed));
        write_train_csv(cfg, metrics.train_rows, out);
    }
    nn::save_checkpoint({agent.net(), agent.adam().steps()},
                        (fs::path(out_dir) / checkpoint_name(seed)).string());

    std::vector<double> rewards;
    rewards.reserve(metrics.train_rows.size());
    for (const auto& r : metrics.train_rows) rewards.push_back(r.total_reward);
    metrics.plateau_episode = plateau_episode(rewards);
    {
        std::ofstream out(fs::path(out_dir) / train_meta_name(seed));
        out << "plateau_episode,final_ma20,skipped_updates\n";
        double final_ma = 0.0;
        if (!rewards.empty()) {
            const std::size_t lo =
                rewards.size() > 20 ? rewards.size() - 20 : std::size_t(0);
            for (std::size_t i = lo; i < rewards.size(); ++i)
                final_ma += rewards[i];
            final_ma /= (rewards.size() - lo);
        }
        out << metrics.plateau_episode << ',' << fmt(final_ma) << ','
            << agent.skipped_updates() << '\n';
    }
    return metrics;
}

std::vector<EvalEpisodeRow> run_eval(const ExperimentConfig& cfg,
                                     const nn::Checkpoint& ck, int episodes,
                                     std::uint64_t seed) {
    mdp::HighwayEnv env = make_env(cfg);
    std::mt19937_64 rng(rl::mix_seed(seed, rl::kAgentStream, 1));

    std::vector<EvalEpisodeRow> rows;
    for (int e = 0; e < episodes; ++e) {
        EvalEpisodeRow row;
        row.episode = e;
        mdp::Observation obs = env.reset(rl::mix_seed(seed, rl::kEvalStream, e));
        while (!env.terminal()) {
            const auto mask = rl::decision_mask(env, cfg.strategy, cfg.safety);
            const int a = rl::select_action(cfg.strategy, ck.net, obs, mask,
                                            0.0, rng);
            const auto res = env.step(static_cast<mdp::MetaAction>(a));
            ++row.steps;
            row.total_reward += res.reward;
            if (res.info.collision && !row.collision) {
                row.collision = true;
                row.time_to_collision = row.steps * cfg.env.policy_period;
            } else if (!row.collision) {
                row.reward_before_collision += res.reward;
            }
            obs = res.obs;
        }
        rows.push_back(row);
    }
    return rows;
}

RunMetrics run_eval_files(const ExperimentConfig& cfg,
                          const std::string& checkpoint_path, int episodes,
                          std::uint64_t seed, const std::string& out_dir) {
    const nn::Checkpoint ck = nn::load_checkpoint(checkpoint_path);
    RunMetrics metrics;
    metrics.eval_rows = run_eval(cfg, ck, episodes, seed);
    for (const auto& r : metrics.eval_rows) {
        metrics.eval_collisions += r.collision ? 1 : 0;
        metrics.mean_reward_before_collision += r.reward_before_collision;
    }
    if (!metrics.eval_rows.empty())
        metrics.mean_reward_before_collision /=
            static_cast<double>(metrics.eval_rows.size());

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        std::ofstream out(fs::path(out_dir) / eval_csv_name(seed));
        write_eval_csv(metrics.eval_rows, out);
    }
    return metrics;
}

}  // namespace hrl::harness
