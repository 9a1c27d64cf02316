#include "svdd/distributed.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "svdd/error.hpp"

namespace svdd {

namespace {

constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

bool row_less(std::span<const double> a, std::span<const double> b) {
    // Total order on bit patterns: rows equivalent under it are exactly the bitwise-equal ones.
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint64_t ua = 0;
        std::uint64_t ub = 0;
        std::memcpy(&ua, &a[k], sizeof ua);
        std::memcpy(&ub, &b[k], sizeof ub);
        if (ua != ub) {
            return ua < ub;
        }
    }
    return false;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> partition_bounds(std::size_t rows, std::size_t workers) {
    if (workers == 0) {
        throw ConfigError("distributed: worker count must be at least 1");
    }
    if (workers > rows) {
        throw ConfigError("distributed: " + std::to_string(workers) + " workers exceed " + std::to_string(rows) +
                          " rows");
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(workers);
    const std::size_t base = rows / workers;
    const std::size_t extra = rows % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        out.emplace_back(begin, begin + len);
        begin += len;
    }
    return out;
}

DataMatrix merge_master_sets(std::span<const DataMatrix> master_sets) {
    std::size_t cols = 0;
    std::vector<std::span<const double>> rows;
    for (const auto& m : master_sets) {
        if (m.empty()) {
            continue;
        }
        if (cols == 0) {
            cols = m.cols();
        } else if (m.cols() != cols) {
            throw InputError("merge_master_sets: master sets disagree on dimension");
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            rows.push_back(m.row(i));
        }
    }
    std::sort(rows.begin(), rows.end(), row_less);
    DataMatrix merged;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows_bitwise_equal(rows[i - 1], rows[i])) {
            continue;
        }
        merged.append_row(rows[i]);
    }
    return merged;
}

SvddModel controller_solve(const DataMatrix& merged, const KernelParams& params, double outlier_fraction,
                           const SolverConfig& solver_config) {
    const auto problem = DualProblem::from_outlier_fraction(merged, params, outlier_fraction);
    KernelCache cache(merged, params, default_cache_capacity(merged.rows()));
    return build_model(problem, solve_dual(problem, solver_config, cache));
}

DistributedTrainResult train_distributed(const DataMatrix& data, const KernelParams& params,
                                         const SamplingConfig& config, const DistributedOptions& options,
                                         const SolverConfig& solver_config) {
    config.validate();
    const auto bounds = partition_bounds(data.rows(), options.workers);
    const auto start = std::chrono::steady_clock::now();

    if (options.workers == 1) {
        auto single = train_sampling(data, params, config, solver_config);
        DataMatrix master = data.select_rows(single.master_rows);
        std::vector<TrainTrace> traces;
        traces.push_back(std::move(single.trace));
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return DistributedTrainResult{std::move(single.model), std::move(traces), std::move(master),
                                      elapsed.count()};
    }

    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.shuffle) {
        Rng shuffle_rng(config.seed ^ kShuffleStream);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
    }

    // Results arrive in completion order; nothing downstream depends on that order.
    std::vector<WorkerOutput> finished;
    std::mutex finished_mutex;
    std::exception_ptr failure;
    std::atomic<std::size_t> next_worker{0};

    auto run_workers = [&] {
        while (true) {
            const std::size_t w = next_worker.fetch_add(1);
            if (w >= options.workers) {
                return;
            }
            try {
                const auto [begin, end] = bounds[w];
                const std::span<const std::size_t> block(order.data() + begin, end - begin);
                const DataMatrix part = data.select_rows(block);
                SamplingConfig worker_config = config;
                worker_config.seed = config.seed + w;
                auto trained = train_sampling(part, params, worker_config, solver_config);
                WorkerOutput out{w, part.select_rows(trained.master_rows), std::move(trained.trace)};
                const std::lock_guard lock(finished_mutex);
                finished.push_back(std::move(out));
            } catch (...) {
                const std::lock_guard lock(finished_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };

    const std::size_t threads =
        options.max_threads == 0 ? options.workers : std::min(options.max_threads, options.workers);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(run_workers);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<DataMatrix> master_sets;
    master_sets.reserve(finished.size());
    std::vector<TrainTrace> traces(options.workers);
    for (auto& out : finished) {
        master_sets.push_back(std::move(out.master_set));
        traces[out.worker_index] = std::move(out.trace);
    }
    DataMatrix merged = merge_master_sets(master_sets);
    SvddModel model = controller_solve(merged, params, config.outlier_fraction, solver_config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return DistributedTrainResult{std::move(model), std::move(traces), std::move(merged), elapsed.count()};
}

}  // namespace svdd
