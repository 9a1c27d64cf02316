#include "svdd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "svdd/error.hpp"

namespace svdd {

namespace {

std::atomic<std::size_t> g_score_calls{0};

double self_term_of(const DataMatrix& sv, const std::vector<double>& alpha, const KernelParams& params) {
    const std::size_t nsv = sv.rows();
    double acc = 0.0;
    for (std::size_t i = 0; i < nsv; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < nsv; ++j) {
            row_sum += alpha[j] * gaussian_kernel(sv.row(i), sv.row(j), params);
        }
        acc += alpha[i] * row_sum;
    }
    return acc;
}

double weighted_kernel_sum(const DataMatrix& sv, const std::vector<double>& alpha, const KernelParams& params,
                           std::span<const double> z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sv.rows(); ++i) {
        acc += alpha[i] * gaussian_kernel(sv.row(i), z, params);
    }
    return acc;
}

}  // namespace

SvddModel::SvddModel(Parts parts) : parts_(std::move(parts)) {
    const auto& p = parts_;
    const std::size_t nsv = p.support_vectors.rows();
    if (nsv == 0) {
        throw InputError("SvddModel: at least one support vector is required");
    }
    if (p.sv_alpha.size() != nsv) {
        throw InputError("SvddModel: alpha count does not match support vector count");
    }
    if (p.center.size() != p.support_vectors.cols()) {
        throw InputError("SvddModel: center dimension does not match support vectors");
    }
    const double sum = std::accumulate(p.sv_alpha.begin(), p.sv_alpha.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InputError("SvddModel: support vector weights sum to " + std::to_string(sum) + ", expected 1");
    }
    for (double a : p.sv_alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw InputError("SvddModel: support vector weights must be positive");
        }
    }
    if (!(p.r_squared >= 0.0) || !std::isfinite(p.r_squared)) {
        throw InputError("SvddModel: R^2 must be finite and nonnegative");
    }
    if (!(p.self_term > 0.0 && p.self_term <= 1.0 + 1e-12)) {
        throw InputError("SvddModel: self term must lie in (0, 1]");
    }
    if (!(p.penalty_c > 0.0)) {
        throw InputError("SvddModel: penalty C must be positive");
    }
}

SvddModel build_model(const DualProblem& problem, const SolveResult& result, const ModelTolerances& tol) {
    const DataMatrix& data = problem.data();
    const std::size_t n = data.rows();
    if (result.alpha.size() != n) {
        throw InputError("build_model: alpha length does not match the problem size");
    }
    const double c = problem.penalty_c();

    std::vector<std::size_t> sv_index;
    for (std::size_t i = 0; i < n; ++i) {
        if (result.alpha[i] > tol.alpha_zero_tol) {
            sv_index.push_back(i);
        }
    }
    if (sv_index.empty()) {
        throw InputError("build_model: solution has no support vectors");
    }

    SvddModel::Parts parts;
    parts.support_vectors = data.select_rows(sv_index);
    parts.sv_alpha.reserve(sv_index.size());
    for (std::size_t i : sv_index) {
        parts.sv_alpha.push_back(result.alpha[i]);
    }
    // Pruned weights are below alpha_zero_tol; restore sum a = 1 over the survivors.
    const double kept = std::accumulate(parts.sv_alpha.begin(), parts.sv_alpha.end(), 0.0);
    if (kept != 1.0) {
        for (double& a : parts.sv_alpha) {
            a /= kept;
        }
    }
    parts.params = problem.params();
    parts.penalty_c = c;
    parts.outlier_fraction = problem.outlier_fraction();
    parts.training_n = n;

    parts.self_term = self_term_of(parts.support_vectors, parts.sv_alpha, parts.params);
    parts.self_term = std::min(parts.self_term, 1.0);

    parts.center.assign(data.cols(), 0.0);
    for (std::size_t k = 0; k < sv_index.size(); ++k) {
        auto x = parts.support_vectors.row(k);
        for (std::size_t d = 0; d < x.size(); ++d) {
            parts.center[d] += parts.sv_alpha[k] * x[d];
        }
    }

    const double upper = c - tol.alpha_boundary_rel_tol * c;
    double r2_sum = 0.0;
    std::size_t boundary_count = 0;
    double r2_max = 0.0;
    for (std::size_t k = 0; k < sv_index.size(); ++k) {
        auto x = parts.support_vectors.row(k);
        const double d2 =
            1.0 - 2.0 * weighted_kernel_sum(parts.support_vectors, parts.sv_alpha, parts.params, x) + parts.self_term;
        r2_max = std::max(r2_max, d2);
        if (result.alpha[sv_index[k]] < upper) {
            r2_sum += d2;
            ++boundary_count;
        }
    }
    if (boundary_count > 0) {
        parts.r_squared = std::max(0.0, r2_sum / static_cast<double>(boundary_count));
    } else {
        parts.r_squared = std::max(0.0, r2_max);
        parts.radius_fallback = true;
    }
    return SvddModel(std::move(parts));
}

double kernel_distance_squared(const SvddModel& model, std::span<const double> z) {
    if (z.size() != model.dimension()) {
        throw InputError("score: observation has " + std::to_string(z.size()) + " features, model expects " +
                         std::to_string(model.dimension()));
    }
    return 1.0 - 2.0 * weighted_kernel_sum(model.support_vectors(), model.sv_alpha(), model.params(), z) +
           model.self_term();
}

ScoreOutcome score(const SvddModel& model, std::span<const double> z) {
    g_score_calls.fetch_add(1, std::memory_order_relaxed);
    const double d2 = kernel_distance_squared(model, z);
    return {d2, d2 > model.r_squared()};
}

std::vector<ScoreOutcome> score_batch(const SvddModel& model, const DataMatrix& data) {
    std::vector<ScoreOutcome> out;
    out.reserve(data.rows());
    if (data.rows() > 0 && data.cols() != model.dimension()) {
        throw InputError("score_batch: data has " + std::to_string(data.cols()) + " features, model expects " +
                         std::to_string(model.dimension()));
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out.push_back(score(model, data.row(i)));
    }
    return out;
}

std::vector<bool> inside_flags(const SvddModel& model, const DataMatrix& data) {
    std::vector<bool> out;
    out.reserve(data.rows());
    for (const auto& s : score_batch(model, data)) {
        out.push_back(!s.is_outlier);
    }
    return out;
}

std::size_t score_call_count() noexcept { return g_score_calls.load(std::memory_order_relaxed); }

void reset_score_call_count() noexcept { g_score_calls.store(0, std::memory_order_relaxed); }

}  // namespace svdd
