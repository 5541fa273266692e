#ifndef NRPERC_EXPERIMENTS_RUNNER_HPP
#define NRPERC_EXPERIMENTS_RUNNER_HPP

// Ensemble orchestration. Replica (n, r) always uses the seed
// derive_seed(master_seed, n, r) and writes into its own slot, so the result
// does not depend on the thread count or on scheduling order.

#include <atomic>
#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "nrperc/errors.hpp"
#include "nrperc/experiments/config.hpp"
#include "nrperc/experiments/result.hpp"
#include "nrperc/experiments/suites.hpp"
#include "nrperc/rng.hpp"

namespace nrperc::experiments {

/// Runs the experiment without touching the filesystem.
inline ExperimentResult execute(const ExperimentConfig& config) {
    validate(config);
    ExperimentResult result;
    result.config = config;
    result.targets = targets_for(config);

    if (config.experiment == Experiment::theory_tables) {
        result.theory = theory_json(config, {});
        return result;
    }

    std::vector<std::unique_ptr<GridPoint>> grid;
    std::vector<const GridPoint*> views;
    for (auto n : config.n_grid) {
        grid.push_back(std::make_unique<GridPoint>(config, n));
        views.push_back(grid.back().get());
    }

    const auto replicas = static_cast<std::size_t>(config.replicas);
    const std::size_t total = grid.size() * replicas;
    result.records.resize(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (failure) return;
            }
            const GridPoint& gp = *grid[idx / replicas];
            Record& rec = result.records[idx];
            rec.n = gp.params.n;
            rec.replica = static_cast<std::int64_t>(idx % replicas);
            rec.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(rec.n),
                                   static_cast<std::uint64_t>(rec.replica));
            try {
                Rng rng = make_rng(rec.seed);
                const auto start = std::chrono::steady_clock::now();
                rec.stats = run_replica(config, gp, rng);
                if (config.record_timing) {
                    rec.runtime_seconds = std::chrono::duration<double>(
                                              std::chrono::steady_clock::now() - start)
                                              .count();
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), total);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    result.theory = theory_json(config, views);
    return result;
}

/// Runs the experiment and, when output_path is set, writes the report atomically.
inline ExperimentResult run(const ExperimentConfig& config) {
    ExperimentResult result = execute(config);
    if (!config.output_path.empty()) {
        write_atomically(config.output_path, render(result, config.output_format));
    }
    return result;
}

inline ExperimentResult single_vs_multi_suite(ExperimentConfig config) {
    config.experiment = Experiment::single_vs_multi;
    if (config.effective_mode() != PercolationMode::single) {
        throw ConfigError("single_vs_multi requires a single-mode schedule");
    }
    return run(config);
}

inline ExperimentResult theory_tables(ExperimentConfig config) {
    config.experiment = Experiment::theory_tables;
    return run(config);
}

}  // namespace nrperc::experiments

#endif  // NRPERC_EXPERIMENTS_RUNNER_HPP
