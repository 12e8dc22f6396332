#include "hrl/harness/compare.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace hrl::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

struct Job {
    const ExperimentConfig* cfg;
    std::uint64_t seed;
    std::string dir;
};

void run_jobs(std::vector<Job>& jobs, int workers) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) return;
            try {
                const Job& j = jobs[i];
                const RunMetrics train = run_training(*j.cfg, j.seed, j.dir);
                (void)train;
                run_eval_files(*j.cfg,
                               (fs::path(j.dir) / checkpoint_name(j.seed)).string(),
                               j.cfg->eval_episodes, j.seed, j.dir);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    const int n = std::max(1, workers);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("compare: run failed: " + first_error);
}

std::vector<double> min_max_scale(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const double span = *hi - *lo;
    std::vector<double> out(xs.size(), 0.0);
    if (span <= 0.0) return out;
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - *lo) / span;
    return out;
}

}  // namespace

CompareReport compare_strategies(const std::vector<ExperimentConfig>& cfgs,
                                 const std::string& out_dir, int jobs) {
    if (cfgs.size() < 2)
        throw std::invalid_argument("compare: need at least two configs");
    for (std::size_t i = 1; i < cfgs.size(); ++i) {
        if (!same_environment(cfgs[0], cfgs[i]))
            throw std::invalid_argument("compare: mismatched environment settings");
        if (cfgs[0].seeds != cfgs[i].seeds)
            throw std::invalid_argument("compare: configs must share the seed list");
    }

    fs::create_directories(out_dir);
    std::vector<Job> queue;
    for (const auto& cfg : cfgs) {
        const std::string dir =
            (fs::path(out_dir) / std::string(rl::strategy_name(cfg.strategy)))
                .string();
        for (std::uint64_t seed : cfg.seeds) queue.push_back({&cfg, seed, dir});
    }
    run_jobs(queue, jobs);

    // Reduce completed run files.
    CompareReport report;
    for (const auto& cfg : cfgs) {
        StrategyOutcome oc;
        oc.name = rl::strategy_name(cfg.strategy);
        const fs::path dir = fs::path(out_dir) / oc.name;
        for (std::uint64_t seed : cfg.seeds) {
            // Plateau from the train meta file.
            std::ifstream meta(dir / train_meta_name(seed));
            std::string header, row;
            if (!std::getline(meta, header) || !std::getline(meta, row))
                throw std::runtime_error("compare: missing meta for " + oc.name);
            oc.plateau.push_back(std::stoi(row.substr(0, row.find(','))));

            std::ifstream train(dir / train_csv_name(seed));
            std::getline(train, header);
            std::vector<double> curve;
            while (std::getline(train, row)) {
                // total_reward is the third column
                std::size_t p = row.find(',');
                p = row.find(',', p + 1);
                const std::size_t q = row.find(',', p + 1);
                curve.push_back(std::stod(row.substr(p + 1, q - p - 1)));
            }
            oc.reward_curves.push_back(std::move(curve));

            std::ifstream eval(dir / eval_csv_name(seed));
            std::getline(eval, header);
            int collisions = 0;
            double before_sum = 0.0;
            int n_eval = 0;
            while (std::getline(eval, row)) {
                std::vector<std::string> cols;
                std::size_t start = 0;
                for (;;) {
                    const std::size_t comma = row.find(',', start);
                    cols.push_back(row.substr(start, comma - start));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                collisions += cols[3] == "1" ? 1 : 0;
                before_sum += std::stod(cols[5]);
                ++n_eval;
            }
            oc.eval_collisions.push_back(collisions);
            oc.mean_reward_before_collision.push_back(
                n_eval > 0 ? before_sum / n_eval : 0.0);
        }
        report.outcomes.push_back(std::move(oc));
    }

    // Scaled mean reward curve per strategy.
    for (const auto& oc : report.outcomes) {
        std::size_t episodes = 0;
        for (const auto& c : oc.reward_curves)
            episodes = std::max(episodes, c.size());
        std::vector<double> mean(episodes, 0.0);
        for (std::size_t e = 0; e < episodes; ++e) {
            double s = 0.0;
            int n = 0;
            for (const auto& c : oc.reward_curves) {
                if (e < c.size()) {
                    s += c[e];
                    ++n;
                }
            }
            mean[e] = n > 0 ? s / n : 0.0;
        }
        const auto scaled = min_max_scale(mean);
        std::ofstream out(fs::path(out_dir) / ("curve_" + oc.name + ".csv"));
        out << "episode,mean_total_reward,scaled\n";
        for (std::size_t e = 0; e < episodes; ++e)
            out << e << ',' << fmt(mean[e]) << ',' << fmt(scaled[e]) << '\n';
    }

    // Per-seed plateau ranking.
    const std::size_t n_seeds = cfgs[0].seeds.size();
    for (std::size_t s = 0; s < n_seeds; ++s) {
        std::vector<std::pair<int, std::string>> order;
        for (const auto& oc : report.outcomes)
            order.emplace_back(oc.plateau[s], oc.name);
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::string> names;
        for (const auto& [p, name] : order) names.push_back(name);
        report.plateau_ranking.push_back(std::move(names));
    }

    {
        std::ofstream out(fs::path(out_dir) / "plateau.csv");
        out << "strategy";
        for (std::uint64_t seed : cfgs[0].seeds) out << ",seed" << seed;
        out << ",median\n";
        for (const auto& oc : report.outcomes) {
            out << oc.name;
            for (int p : oc.plateau) out << ',' << p;
            std::vector<int> sorted = oc.plateau;
            std::sort(sorted.begin(), sorted.end());
            out << ',' << sorted[sorted.size() / 2] << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "collisions.csv");
        out << "strategy";
        for (std::uint64_t seed : cfgs[0].seeds) out << ",seed" << seed;
        out << ",total\n";
        for (const auto& oc : report.outcomes) {
            out << oc.name;
            int total = 0;
            for (int c : oc.eval_collisions) {
                out << ',' << c;
                total += c;
            }
            out << ',' << total << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "reward_before_collision.csv");
        out << "strategy";
        for (std::uint64_t seed : cfgs[0].seeds) out << ",seed" << seed;
        out << ",mean\n";
        for (const auto& oc : report.outcomes) {
            out << oc.name;
            double total = 0.0;
            for (double r : oc.mean_reward_before_collision) {
                out << ',' << fmt(r);
                total += r;
            }
            out << ',' << fmt(total / oc.mean_reward_before_collision.size())
                << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "summary.txt");
        out << "strategy comparison over " << n_seeds << " seeds\n\n";
        out << "episodes-to-plateau (per seed):\n";
        for (const auto& oc : report.outcomes) {
            out << "  " << oc.name << ":";
            for (int p : oc.plateau) out << ' ' << p;
            out << '\n';
        }
        out << "\neval collisions (per seed):\n";
        for (const auto& oc : report.outcomes) {
            out << "  " << oc.name << ":";
            for (int c : oc.eval_collisions) out << ' ' << c;
            out << '\n';
        }
        out << "\nmean reward before collision (per seed):\n";
        for (const auto& oc : report.outcomes) {
            out << "  " << oc.name << ":";
            for (double r : oc.mean_reward_before_collision)
                out << ' ' << fmt(r);
            out << '\n';
        }
        out << "\nplateau ranking per seed (fastest first):\n";
        for (std::size_t s = 0; s < report.plateau_ranking.size(); ++s) {
            out << "  seed" << cfgs[0].seeds[s] << ":";
            for (const auto& name : report.plateau_ranking[s]) out << ' ' << name;
            out << '\n';
        }
    }
    return report;
}

}  // namespace hrl::harness
