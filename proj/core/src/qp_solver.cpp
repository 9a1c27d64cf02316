#include "svdd/qp_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "svdd/error.hpp"

namespace svdd {

namespace {

constexpr double kCurvatureFloor = 1e-12;

std::atomic<SolveAuditFn> g_audit{nullptr};
std::atomic<void*> g_audit_context{nullptr};

void require_finite(const DataMatrix& data) {
    for (double v : data.values()) {
        if (!std::isfinite(v)) {
            throw NumericError("solve_dual: data contains non-finite values");
        }
    }
}

}  // namespace

DualProblem DualProblem::from_outlier_fraction(const DataMatrix& data, const KernelParams& params,
                                               double outlier_fraction) {
    if (!(outlier_fraction > 0.0 && outlier_fraction <= 1.0)) {
        throw ConfigError("outlier fraction f must lie in (0, 1], got " + std::to_string(outlier_fraction));
    }
    if (data.rows() == 0) {
        throw ConfigError("DualProblem: data must have at least one row");
    }
    DualProblem problem(data, params, 1.0 / (static_cast<double>(data.rows()) * outlier_fraction));
    problem.outlier_fraction_ = outlier_fraction;
    return problem;
}

DualProblem::DualProblem(const DataMatrix& data, const KernelParams& params, double penalty_c)
    : data_(&data), params_(params), penalty_c_(penalty_c) {
    if (data.rows() == 0) {
        throw ConfigError("DualProblem: data must have at least one row");
    }
    if (!(penalty_c > 0.0) || !std::isfinite(penalty_c)) {
        throw ConfigError("DualProblem: penalty C must be positive and finite");
    }
    // n*C >= 1 up to rounding in 1/(n f) * n.
    if (static_cast<double>(data.rows()) * penalty_c < 1.0 - 1e-12) {
        throw ConfigError("DualProblem: infeasible, n * C = " +
                          std::to_string(static_cast<double>(data.rows()) * penalty_c) + " < 1");
    }
}

std::size_t SolverConfig::iteration_cap(std::size_t n) const noexcept {
    if (max_iterations > 0) {
        return max_iterations;
    }
    return std::max<std::size_t>(100 * n, 10000);
}

std::vector<double> initialize_alpha(const DualProblem& problem) {
    const std::size_t n = problem.size();
    const double c = problem.penalty_c();
    std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
    // 1/n <= C whenever n C >= 1; clip only guards the rounding slack admitted by DualProblem.
    bool clipped = false;
    for (double& a : alpha) {
        if (a > c) {
            a = c;
            clipped = true;
        }
    }
    if (clipped) {
        const double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
        for (double& a : alpha) {
            a /= sum;
        }
    }
    return alpha;
}

std::vector<double> sparse_initial_alpha(const DualProblem& problem) {
    const std::size_t n = problem.size();
    const double c = std::min(problem.penalty_c(), 1.0);
    std::vector<double> alpha(n, 0.0);
    double remaining = 1.0;
    for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
        alpha[i] = std::min(c, remaining);
        remaining -= alpha[i];
        if (remaining < 1e-15) {
            remaining = 0.0;
        }
    }
    if (remaining > 0.0) {
        // Rounding left a sliver; fold it into the first coordinate with room.
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] + remaining <= problem.penalty_c()) {
                alpha[i] += remaining;
                break;
            }
        }
    }
    return alpha;
}

double dual_objective(const DualProblem& problem, const std::vector<double>& alpha) {
    const DataMatrix& data = problem.data();
    const std::size_t n = data.rows();
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) {
            continue;
        }
        linear += alpha[i] * gaussian_kernel(data.row(i), data.row(i), problem.params());
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] != 0.0) {
                quadratic += alpha[i] * alpha[j] * gaussian_kernel(data.row(i), data.row(j), problem.params());
            }
        }
    }
    return linear - quadratic;
}

SolveResult solve_dual(const DualProblem& problem, const SolverConfig& config, KernelCache& cache,
                       SolverObserver* observer) {
    if (&cache.data() != &problem.data() || !(cache.params() == problem.params())) {
        throw ConfigError("solve_dual: kernel cache was built for a different problem");
    }
    if (!(config.kkt_tolerance > 0.0)) {
        throw ConfigError("solve_dual: kkt_tolerance must be positive");
    }
    if (cache.capacity() < std::min<std::size_t>(problem.size(), 2)) {
        throw ConfigError("solve_dual: kernel cache must hold at least two rows");
    }
    require_finite(problem.data());

    const std::size_t n = problem.size();
    const double c = problem.penalty_c();

    const bool uniform = config.start == SolverConfig::Start::uniform ||
                         (config.start == SolverConfig::Start::automatic && n <= config.uniform_start_limit);
    std::vector<double> alpha = uniform ? initialize_alpha(problem) : sparse_initial_alpha(problem);

    // g = gradient of a^T K a = 2 K a. Minimizing a^T K a is the dual, since sum a_i K_ii = 1.
    std::vector<double> grad(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (alpha[k] == 0.0) {
            continue;
        }
        const std::vector<double>& col = cache.row(k);
        const double w = 2.0 * alpha[k];
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += w * col[t];
        }
    }

    // Objective = sum a_i K_ii - a^T K a with K_ii = 1.
    double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    double quad = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        quad += alpha[t] * grad[t];
    }
    double objective = sum_alpha - 0.5 * quad;
    if (!std::isfinite(objective)) {
        throw NumericError("solve_dual: non-finite objective at the starting point");
    }

    const std::size_t cap = config.iteration_cap(n);
    SolveResult result;
    double violation = 0.0;

    auto select_pair = [&](std::size_t& up, std::size_t& low) {
        double g_up = std::numeric_limits<double>::infinity();
        double g_low = -std::numeric_limits<double>::infinity();
        up = n;
        low = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double g = grad[t];
            if (alpha[t] < c && g < g_up) {
                g_up = g;
                up = t;
            }
            if (alpha[t] > 0.0 && g > g_low) {
                g_low = g;
                low = t;
            }
        }
        if (up == n || low == n) {
            return 0.0;
        }
        return g_low - g_up;
    };

    std::size_t iter = 0;
    while (true) {
        std::size_t up = 0;
        std::size_t low = 0;
        violation = select_pair(up, low);
        if (!(violation > config.kkt_tolerance)) {
            if (!std::isfinite(violation)) {
                throw NumericError("solve_dual: non-finite gradient");
            }
            break;
        }
        if (iter >= cap) {
            result.hit_iteration_cap = true;
            break;
        }

        const std::vector<double>& row_up = cache.row(up);
        const std::vector<double>& row_low = cache.row(low);
        const double curvature = row_up[up] + row_low[low] - 2.0 * row_up[low];

        // Move weight delta from `low` to `up`; the objective a^T K a changes by
        // delta (g_up - g_low) + delta^2 * curvature.
        const double room = std::min(c - alpha[up], alpha[low]);
        double delta = room;
        if (curvature > kCurvatureFloor) {
            delta = std::min(room, violation / (2.0 * curvature));
        }
        if (!(delta > 0.0)) {
            // Degenerate step: bounds leave no room even though the pair violates. Cannot
            // happen in exact arithmetic; treat as converged at this precision.
            break;
        }

        const double decrease = delta * (grad[up] - grad[low]) + delta * delta * curvature;
        if (delta == alpha[low]) {
            alpha[low] = 0.0;
        } else {
            alpha[low] -= delta;
        }
        if (delta == c - alpha[up]) {
            alpha[up] = c;
        } else {
            alpha[up] += delta;
        }

        const double step = 2.0 * delta;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += step * (row_up[t] - row_low[t]);
        }
        objective -= decrease;
        ++iter;
        if (observer != nullptr) {
            observer->on_iteration(iter, objective);
        }
    }

    // Remove accumulated drift from sum a = 1, on one free coordinate so bounded ones stay at C.
    sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    if (sum_alpha != 1.0) {
        const double residual = 1.0 - sum_alpha;
        std::size_t target = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double moved = alpha[t] + residual;
            if (alpha[t] > 0.0 && alpha[t] < c && moved >= 0.0 && moved <= c &&
                (target == n || alpha[t] > alpha[target])) {
                target = t;
            }
        }
        if (target != n) {
            alpha[target] += residual;
        } else {
            for (double& a : alpha) {
                a = std::min(a / sum_alpha, c);
            }
        }
    }

    quad = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        quad += alpha[t] * grad[t];
    }
    result.alpha = std::move(alpha);
    result.objective = 1.0 - 0.5 * quad;
    result.iterations = iter;
    result.max_kkt_violation = std::max(0.0, violation);
    if (const SolveAuditFn audit = g_audit.load(std::memory_order_acquire)) {
        audit(problem, config, result, g_audit_context.load(std::memory_order_acquire));
    }
    return result;
}

void set_solve_audit(SolveAuditFn fn, void* context) noexcept {
    g_audit_context.store(context, std::memory_order_release);
    g_audit.store(fn, std::memory_order_release);
}

SolveResult solve_dual(const DualProblem& problem, const SolverConfig& config) {
    KernelCache cache(problem.data(), problem.params(), default_cache_capacity(problem.size()));
    return solve_dual(problem, config, cache);
}

}  // namespace svdd
