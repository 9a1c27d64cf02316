#include "svdd/trainer_sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "svdd/error.hpp"
#include "svdd/io.hpp"

namespace svdd {

namespace {

double norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

double distance(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_distance(a, b)); }

double penalty_for(std::size_t solve_rows, const SamplingConfig& config, std::size_t sample_size) {
    const double f = config.outlier_fraction;
    if (config.penalty_basis == SamplingConfig::PenaltyBasis::sample_size) {
        const double c = 1.0 / (static_cast<double>(sample_size) * f);
        return std::max(c, 1.0 / static_cast<double>(solve_rows));
    }
    return 1.0 / (static_cast<double>(solve_rows) * f);
}

// The subset matrix must outlive the problem that refers to it, so the solve is built in place.
void solve_subset(const DataMatrix& data, const std::vector<std::size_t>& rows, const KernelParams& params,
                  const SamplingConfig& config, std::size_t sample_size, const SolverConfig& solver_config,
                  const ModelTolerances& tol, std::vector<std::size_t>& support_rows, DataMatrix& subset,
                  SolveResult& result, double& penalty) {
    subset = data.select_rows(rows);
    penalty = penalty_for(rows.size(), config, sample_size);
    const DualProblem problem(subset, params, penalty);
    KernelCache cache(subset, params, std::max<std::size_t>(subset.rows(), 1));
    result = solve_dual(problem, solver_config, cache);
    support_rows.clear();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (result.alpha[k] > tol.alpha_zero_tol) {
            support_rows.push_back(rows[k]);
        }
    }
}

}  // namespace

void SamplingConfig::validate() const {
    if (!(outlier_fraction > 0.0 && outlier_fraction <= 1.0)) {
        throw ConfigError("sampling: outlier fraction f must lie in (0, 1]");
    }
    if (!(center_tolerance > 0.0) || !(radius_tolerance > 0.0)) {
        throw ConfigError("sampling: convergence tolerances must be positive");
    }
    if (consecutive == 0 || max_iterations == 0) {
        throw ConfigError("sampling: consecutive count and max iterations must be positive");
    }
}

std::size_t SamplingConfig::resolved_sample_size(std::size_t dimension) const noexcept {
    if (sample_size > 0) {
        return sample_size;
    }
    return std::max<std::size_t>(dimension + 1, 2);
}

bool meets_convergence_criteria(const TraceRecord& previous, const TraceRecord& current,
                                const SamplingConfig& config) {
    const double r2_change = std::abs(current.r_squared - previous.r_squared);
    if (!(r2_change <= config.radius_tolerance * previous.r_squared)) {
        return false;
    }
    if (!config.check_center) {
        return true;
    }
    const double denom = std::max(norm(previous.center), 1e-12);
    return distance(current.center, previous.center) <= config.center_tolerance * denom;
}

bool check_convergence(const TrainTrace& trace, const SamplingConfig& config) {
    const auto& r = trace.records;
    if (r.empty()) {
        return false;
    }
    if (r.back().iteration >= config.max_iterations) {
        return true;
    }
    if (r.size() < config.consecutive + 1) {
        return false;
    }
    for (std::size_t k = r.size() - config.consecutive; k < r.size(); ++k) {
        if (!meets_convergence_criteria(r[k - 1], r[k], config)) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> sample_indices(std::size_t rows, std::size_t count, Rng& rng) {
    if (rows == 0) {
        throw InputError("sample_with_replacement: data is empty");
    }
    if (count == 0) {
        throw InputError("sample_with_replacement: sample size must be at least 1");
    }
    std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
    std::vector<std::size_t> out(count);
    for (auto& idx : out) {
        idx = pick(rng);
    }
    return out;
}

DataMatrix sample_with_replacement(const DataMatrix& data, std::size_t count, Rng& rng) {
    const auto idx = sample_indices(data.rows(), count, rng);
    return data.select_rows(idx);
}

std::vector<std::size_t> union_distinct_rows(const DataMatrix& data, std::span<const std::size_t> first,
                                             std::span<const std::size_t> second) {
    std::vector<std::size_t> out;
    out.reserve(first.size() + second.size());
    auto add = [&](std::size_t idx) {
        const auto row = data.row(idx);
        for (std::size_t kept : out) {
            if (rows_bitwise_equal(data.row(kept), row)) {
                return;
            }
        }
        out.push_back(idx);
    };
    for (std::size_t idx : first) {
        add(idx);
    }
    for (std::size_t idx : second) {
        add(idx);
    }
    return out;
}

SamplingTrainResult train_sampling(const DataMatrix& data, const KernelParams& params, const SamplingConfig& config,
                                   const SolverConfig& solver_config) {
    config.validate();
    if (data.empty()) {
        throw InputError("train_sampling: training data is empty");
    }
    const auto start = std::chrono::steady_clock::now();
    const std::size_t sample_size = config.resolved_sample_size(data.cols());
    const ModelTolerances tol;
    Rng rng(config.seed);

    DataMatrix subset;
    SolveResult solved;
    double penalty = 0.0;
    std::vector<std::size_t> sample_sv;

    // Initial master set: support vectors of one sample, duplicates collapsed.
    solve_subset(data, sample_indices(data.rows(), sample_size, rng), params, config, sample_size, solver_config, tol,
                 sample_sv, subset, solved, penalty);
    std::vector<std::size_t> master = union_distinct_rows(data, sample_sv, {});

    TrainTrace trace;
    std::vector<std::size_t> union_rows;
    std::vector<std::size_t> new_master;
    DataMatrix union_subset;
    SolveResult union_solved;
    double union_penalty = 0.0;

    for (std::size_t iteration = 1;; ++iteration) {
        solve_subset(data, sample_indices(data.rows(), sample_size, rng), params, config, sample_size, solver_config,
                     tol, sample_sv, subset, solved, penalty);
        union_rows = union_distinct_rows(data, master, sample_sv);
        solve_subset(data, union_rows, params, config, sample_size, solver_config, tol, new_master, union_subset,
                     union_solved, union_penalty);

        const DualProblem union_problem(union_subset, params, union_penalty);
        SvddModel step_model = build_model(union_problem, union_solved, tol);

        TraceRecord rec;
        rec.iteration = iteration;
        rec.r_squared = step_model.r_squared();
        rec.center = step_model.center();
        rec.master_set_size = new_master.size();
        if (!trace.records.empty()) {
            const TraceRecord& prev = trace.records.back();
            rec.center_delta_norm = distance(rec.center, prev.center);
            rec.criteria_met = meets_convergence_criteria(prev, rec, config);
            rec.streak = rec.criteria_met ? prev.streak + 1 : 0;
        }
        trace.records.push_back(std::move(rec));
        master.swap(new_master);

        const bool stable = trace.records.back().streak >= config.consecutive;
        if (stable || iteration >= config.max_iterations) {
            trace.status = stable ? TrainStatus::converged : TrainStatus::max_iterations;
            auto parts = step_model.parts();
            parts.outlier_fraction = config.outlier_fraction;
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            return SamplingTrainResult{SvddModel(std::move(parts)), std::move(trace), std::move(master),
                                       elapsed.count()};
        }
    }
}

void write_trace_csv(std::ostream& out, const TrainTrace& trace) {
    out << "iteration,r_squared,center_norm_delta,master_set_size\n";
    for (const auto& r : trace.records) {
        out << r.iteration << ',' << format_double(r.r_squared) << ',' << format_double(r.center_delta_norm) << ','
            << r.master_set_size << '\n';
    }
}

}  // namespace svdd
