#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <svdd/svdd.hpp>

namespace svdd::tools {

/// Worker threads for sweeps: SVDD_THREADS when set to a positive integer, otherwise 1.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` threads. Exceptions escaping body are
/// rethrown (the first one) after all threads finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

// ---- sample-size sweep ----

struct SampleSizeSweepConfig {
    std::size_t min_size = 3;
    std::size_t max_size = 20;
    double bandwidth = 1.0;
    SamplingConfig sampling;  // sample_size and seed are set per cell
    std::size_t threads = 1;
};

struct SampleSizeRow {
    std::size_t sample_size = 0;
    std::size_t iterations = 0;
    double r_squared = 0.0;
    std::size_t n_sv = 0;
    double seconds = 0.0;
    std::string status;  // converged | max_iter | error
    std::string error;
    bool min_time = false;
};

/// One sampling run per sample size; cell i uses seed sampling.seed + i. A failing cell becomes an
/// error row. The fastest non-error row is flagged min_time.
std::vector<SampleSizeRow> sweep_sample_sizes(const DataMatrix& data, const SampleSizeSweepConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SampleSizeRow>& rows, bool include_timing);

// ---- random polygon simulation ----

struct PolygonSimConfig {
    std::vector<std::size_t> vertex_counts{5, 10, 15, 20, 25, 30};
    std::size_t reps = 20;
    std::size_t interior = 600;
    std::size_t sample_size = 5;
    std::vector<double> bandwidths{1.0, 1.44, 1.88, 2.33, 2.77, 3.22, 3.66, 4.11, 4.55, 5.0};
    double outlier_fraction = 0.001;
    double r_min = 3.0;
    double r_max = 5.0;
    std::size_t resolution = 200;
    std::uint64_t seed = 0;
    SamplingConfig sampling;  // sample_size, outlier_fraction and seed are overridden per cell
    std::size_t threads = 1;
};

struct PolygonSimRow {
    enum class Kind { same_s, max_over_s };
    Kind kind = Kind::same_s;
    std::size_t k = 0;
    std::size_t rep = 0;
    double s = 0.0;  // unused for max_over_s
    double f1_full = 0.0;
    double f1_sampling = 0.0;
    std::optional<double> ratio;
    bool degenerate = false;
    std::string error;
};

/// For every (k, rep): a random polygon, `interior` uniform points, then for each s a full and a
/// sampling model scored on the labeled grid. Emits one same_s row per (k, rep, s) followed by one
/// max_over_s row per (k, rep) comparing the best F1 of each method across s.
/// Polygon (k index a, rep r) uses seed + a * reps + r.
std::vector<PolygonSimRow> simulate_polygons(const PolygonSimConfig& config);

void write_polygon_sim_csv(std::ostream& out, const std::vector<PolygonSimRow>& rows);

}  // namespace svdd::tools
