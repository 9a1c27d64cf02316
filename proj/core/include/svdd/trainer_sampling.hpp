#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/kernel.hpp"
#include "svdd/model.hpp"
#include "svdd/qp_solver.hpp"

namespace svdd {

using Rng = std::mt19937_64;

struct SamplingConfig {
    /// Rows drawn per iteration. 0 selects m + 1 (at least 2).
    std::size_t sample_size = 0;
    double outlier_fraction = 0.001;
    /// Relative tolerance on the input-space center a_i.
    double center_tolerance = 1e-3;
    /// Relative tolerance on R^2_i.
    double radius_tolerance = 1e-3;
    /// Consecutive iterations that must meet the tolerances.
    std::size_t consecutive = 5;
    std::size_t max_iterations = 1000;
    std::uint64_t seed = 0;
    /// When false only the R^2 criterion is checked.
    bool check_center = true;

    /// Which row count defines C = 1/(n f) in each solve.
    enum class PenaltyBasis {
        solve_size,   // rows in that solve (sample or union)
        sample_size,  // the configured sample size for every solve, raised to 1/rows if infeasible
    };
    PenaltyBasis penalty_basis = PenaltyBasis::solve_size;

    /// Throws ConfigError on nonpositive tolerances or counts.
    void validate() const;
    std::size_t resolved_sample_size(std::size_t dimension) const noexcept;
};

struct TraceRecord {
    std::size_t iteration = 0;
    double r_squared = 0.0;
    std::vector<double> center;
    /// ||a_i - a_{i-1}||; 0 for the first record.
    double center_delta_norm = 0.0;
    std::size_t master_set_size = 0;
    /// Both tolerances met against the previous record.
    bool criteria_met = false;
    /// Length of the run of consecutive records meeting the criteria, ending here.
    std::size_t streak = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class TrainStatus { converged, max_iterations };

struct TrainTrace {
    std::vector<TraceRecord> records;
    TrainStatus status = TrainStatus::max_iterations;

    friend bool operator==(const TrainTrace&, const TrainTrace&) = default;
};

/// Whether `current` meets the center and R^2 tolerances relative to `previous`.
bool meets_convergence_criteria(const TraceRecord& previous, const TraceRecord& current, const SamplingConfig& config);

/// True when the last record reached max_iterations, or the last `consecutive` records each
/// meet the criteria against their predecessor. The first record never does.
bool check_convergence(const TrainTrace& trace, const SamplingConfig& config);

/// `count` row indices drawn independently and uniformly from [0, rows).
std::vector<std::size_t> sample_indices(std::size_t rows, std::size_t count, Rng& rng);

/// `count` rows drawn with replacement. Throws InputError on empty data or count == 0.
DataMatrix sample_with_replacement(const DataMatrix& data, std::size_t count, Rng& rng);

/// Indices of `first` followed by `second`, keeping only the first occurrence of each distinct
/// row content (bitwise comparison).
std::vector<std::size_t> union_distinct_rows(const DataMatrix& data, std::span<const std::size_t> first,
                                             std::span<const std::size_t> second);

struct SamplingTrainResult {
    SvddModel model;
    TrainTrace trace;
    /// Rows of the training data making up the final master set, in solve order.
    std::vector<std::size_t> master_rows;
    double seconds = 0.0;
};

/// Iterative sampling trainer. Each iteration draws a sample, solves it, unions its support
/// vectors with the master set, solves the union and takes its support vectors as the new master
/// set. The returned model comes from the last union solve. Never scores the training data.
SamplingTrainResult train_sampling(const DataMatrix& data, const KernelParams& params, const SamplingConfig& config,
                                   const SolverConfig& solver_config = {});

/// Writes iteration,r_squared,center_norm_delta,master_set_size with a header line.
void write_trace_csv(std::ostream& out, const TrainTrace& trace);

}  // namespace svdd
