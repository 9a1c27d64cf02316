#include "svdd/tools/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string_view>
#include <thread>

namespace svdd::tools {

std::size_t default_thread_count() {
    const char* env = std::getenv("SVDD_THREADS");
    if (env == nullptr) {
        return 1;
    }
    const std::string_view text(env);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
        return 1;
    }
    return value;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<SampleSizeRow> sweep_sample_sizes(const DataMatrix& data, const SampleSizeSweepConfig& config) {
    if (config.min_size == 0 || config.min_size > config.max_size) {
        throw ConfigError("sample-size sweep: need 1 <= min <= max");
    }
    const KernelParams params(config.bandwidth);
    const std::size_t cells = config.max_size - config.min_size + 1;
    std::vector<SampleSizeRow> rows(cells);
    parallel_for(cells, config.threads, [&](std::size_t i) {
        SampleSizeRow& row = rows[i];
        row.sample_size = config.min_size + i;
        SamplingConfig sc = config.sampling;
        sc.sample_size = row.sample_size;
        sc.seed = config.sampling.seed + i;
        try {
            const auto result = train_sampling(data, params, sc);
            row.iterations = result.trace.records.size();
            row.r_squared = result.model.r_squared();
            row.n_sv = result.model.support_vector_count();
            row.seconds = result.seconds;
            row.status = result.trace.status == TrainStatus::converged ? "converged" : "max_iter";
        } catch (const std::exception& e) {
            row.status = "error";
            row.error = e.what();
        }
    });
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "error" && (!best || rows[i].seconds < rows[*best].seconds)) {
            best = i;
        }
    }
    if (best) {
        rows[*best].min_time = true;
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SampleSizeRow>& rows, bool include_timing) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out << "sample_size,iterations,r_squared,n_sv,seconds,converged,error,min_time\n";
    for (const auto& r : rows) {
        const bool failed = r.status == "error";
        out << r.sample_size << ',' << r.iterations << ',' << format_double(failed ? nan : r.r_squared) << ','
            << r.n_sv << ',' << (include_timing ? format_double(r.seconds) : "0") << ','
            << (r.status == "converged" ? 1 : 0) << ',' << (failed ? 1 : 0) << ','
            << ((include_timing && r.min_time) ? 1 : 0) << '\n';
    }
}

std::vector<PolygonSimRow> simulate_polygons(const PolygonSimConfig& config) {
    if (config.vertex_counts.empty() || config.reps == 0 || config.bandwidths.empty()) {
        throw ConfigError("simulate-polygons: need at least one vertex count, rep and bandwidth");
    }
    const std::size_t n_s = config.bandwidths.size();
    const std::size_t polygons = config.vertex_counts.size() * config.reps;
    // rows_per_polygon = n_s same-s rows, then one max-over-s row
    std::vector<PolygonSimRow> rows(polygons * (n_s + 1));

    parallel_for(polygons, config.threads, [&](std::size_t p) {
        const std::size_t k = config.vertex_counts[p / config.reps];
        const std::size_t rep = p % config.reps;
        const std::uint64_t seed = config.seed + p;
        PolygonSimRow* out = &rows[p * (n_s + 1)];
        for (std::size_t j = 0; j <= n_s; ++j) {
            out[j].k = k;
            out[j].rep = rep;
            out[j].kind = j < n_s ? PolygonSimRow::Kind::same_s : PolygonSimRow::Kind::max_over_s;
            out[j].s = j < n_s ? config.bandwidths[j] : 0.0;
        }
        try {
            const Polygon poly = generate_polygon(k, config.r_min, config.r_max, seed);
            const DataMatrix interior = sample_polygon_interior(poly, config.interior, seed);
            const LabeledGrid grid = label_grid(poly, config.resolution);
            const DataMatrix grid_points = grid.grid.points();

            double best_full = 0.0;
            double best_sampling = 0.0;
            bool any_degenerate = false;
            for (std::size_t j = 0; j < n_s; ++j) {
                PolygonSimRow& row = out[j];
                try {
                    const KernelParams params(config.bandwidths[j]);
                    const auto full = train_full(interior, params, config.outlier_fraction);
                    SamplingConfig sc = config.sampling;
                    sc.sample_size = config.sample_size;
                    sc.outlier_fraction = config.outlier_fraction;
                    sc.seed = seed;
                    const auto sampled = train_sampling(interior, params, sc);
                    const F1Ratio r = f1_ratio(sampled.model, full.model, grid_points, grid.labels);
                    row.f1_full = r.full.f1;
                    row.f1_sampling = r.sampling.f1;
                    row.ratio = r.ratio;
                    row.degenerate = r.full.degenerate || r.sampling.degenerate;
                    best_full = std::max(best_full, row.f1_full);
                    best_sampling = std::max(best_sampling, row.f1_sampling);
                    any_degenerate = any_degenerate || row.degenerate;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            PolygonSimRow& summary = out[n_s];
            summary.f1_full = best_full;
            summary.f1_sampling = best_sampling;
            if (best_full > 0.0) {
                summary.ratio = best_sampling / best_full;
            }
            summary.degenerate = any_degenerate;
        } catch (const std::exception& e) {
            for (std::size_t j = 0; j <= n_s; ++j) {
                out[j].error = e.what();
            }
        }
    });
    return rows;
}

void write_polygon_sim_csv(std::ostream& out, const std::vector<PolygonSimRow>& rows) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out << "k,rep,s,f1_full,f1_sampling,ratio,degenerate,error,max_over_s\n";
    for (const auto& r : rows) {
        const bool same = r.kind == PolygonSimRow::Kind::same_s;
        out << r.k << ',' << r.rep << ',' << format_double(same ? r.s : nan) << ',' << format_double(r.f1_full)
            << ',' << format_double(r.f1_sampling) << ',' << format_double(r.ratio.value_or(nan)) << ','
            << (r.degenerate ? 1 : 0) << ',' << (r.error.empty() ? 0 : 1) << ',' << (same ? 0 : 1) << '\n';
    }
}

}  // namespace svdd::tools
