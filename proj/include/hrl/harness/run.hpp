#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrl/harness/config.hpp"
#include "hrl/nn/checkpoint.hpp"
#include "hrl/rl/trainer.hpp"

namespace hrl::harness {

struct EvalEpisodeRow {
    int episode = 0;
    double total_reward = 0.0;
    int steps = 0;
    bool collision = false;
    std::optional<double> time_to_collision;  // s, multiple of the policy period
    double reward_before_collision = 0.0;     // whole episode when no collision
};

struct RunMetrics {
    std::vector<rl::EpisodeLog> train_rows;
    std::vector<EvalEpisodeRow> eval_rows;
    int eval_collisions = 0;
    double mean_reward_before_collision = 0.0;
    int plateau_episode = -1;
};

// First episode whose trailing moving average reaches `frac` of the final
// moving average. Returns -1 for an empty curve.
int plateau_episode(const std::vector<double>& rewards, int window = 20,
                    double frac = 0.9);

// File names produced inside an output directory for one seed.
std::string train_csv_name(std::uint64_t seed);
std::string train_meta_name(std::uint64_t seed);
std::string eval_csv_name(std::uint64_t seed);
std::string checkpoint_name(std::uint64_t seed);

// Full training for one seed: per-episode CSV, checkpoint, and a convergence
// summary are written under out_dir (created if missing).
RunMetrics run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                        const std::string& out_dir);

// Greedy evaluation of a checkpoint (epsilon 0, masking still active for the
// masked strategies) over `episodes` unseen episodes.
std::vector<EvalEpisodeRow> run_eval(const ExperimentConfig& cfg,
                                     const nn::Checkpoint& ck, int episodes,
                                     std::uint64_t seed);

// As above but reading the checkpoint from disk and writing the eval CSV.
RunMetrics run_eval_files(const ExperimentConfig& cfg,
                          const std::string& checkpoint_path, int episodes,
                          std::uint64_t seed, const std::string& out_dir);

void write_train_csv(const ExperimentConfig& cfg,
                     const std::vector<rl::EpisodeLog>& rows, std::ostream& out);
void write_eval_csv(const std::vector<EvalEpisodeRow>& rows, std::ostream& out);

}  // namespace hrl::harness
