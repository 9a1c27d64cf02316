#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/kernel.hpp"
#include "svdd/model.hpp"
#include "svdd/qp_solver.hpp"
#include "svdd/trainer_sampling.hpp"

namespace svdd {

struct DistributedOptions {
    std::size_t workers = 1;
    /// Worker threads run at once; 0 means one per worker.
    std::size_t max_threads = 0;
    /// Shuffle rows (seeded from the sampling seed) before the contiguous split.
    bool shuffle = true;
};

struct WorkerOutput {
    std::size_t worker_index = 0;
    /// The worker's final master set, as rows.
    DataMatrix master_set;
    TrainTrace trace;
};

struct DistributedTrainResult {
    SvddModel model;
    /// Indexed by worker.
    std::vector<TrainTrace> worker_traces;
    /// Controller input: the distinct union of all worker master sets.
    DataMatrix controller_set;
    double seconds = 0.0;
};

/// Contiguous [begin, end) bounds of `workers` blocks over `rows`; block sizes differ by at most one.
std::vector<std::pair<std::size_t, std::size_t>> partition_bounds(std::size_t rows, std::size_t workers);

/// Distinct union of master sets in canonical (lexicographic) row order, so the result does not
/// depend on the order in which workers finished.
DataMatrix merge_master_sets(std::span<const DataMatrix> master_sets);

/// Final SVDD over the merged set with C = 1 / (|S'| f).
SvddModel controller_solve(const DataMatrix& merged, const KernelParams& params, double outlier_fraction,
                           const SolverConfig& solver_config = {});

/// Partitions the rows over `options.workers` in-process workers, runs the sampling trainer on
/// each block (worker w uses seed config.seed + w), merges their master sets and solves once more.
/// With a single worker the sampling trainer's own result is returned unchanged.
/// Throws ConfigError when workers is 0 or exceeds the row count.
DistributedTrainResult train_distributed(const DataMatrix& data, const KernelParams& params,
                                         const SamplingConfig& config, const DistributedOptions& options,
                                         const SolverConfig& solver_config = {});

}  // namespace svdd
