#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/kernel.hpp"

namespace svdd {

/// The kernelized SVDD dual over one data set:
///
///   maximize   sum_i a_i K(x_i, x_i) - sum_ij a_i a_j K(x_i, x_j)
///   subject to sum_i a_i = 1,  0 <= a_i <= C.
///
/// Holds a non-owning reference to the data; the data must outlive the problem.
class DualProblem {
public:
    /// C = 1 / (n f). Throws ConfigError unless f is in (0, 1] and n >= 1.
    static DualProblem from_outlier_fraction(const DataMatrix& data, const KernelParams& params,
                                             double outlier_fraction);

    /// Explicit C. Throws ConfigError when n < 1, C <= 0 or n * C < 1 (infeasible).
    DualProblem(const DataMatrix& data, const KernelParams& params, double penalty_c);

    const DataMatrix& data() const noexcept { return *data_; }
    const KernelParams& params() const noexcept { return params_; }
    double penalty_c() const noexcept { return penalty_c_; }
    /// f when built by from_outlier_fraction, 0 when C was given directly.
    double outlier_fraction() const noexcept { return outlier_fraction_; }
    std::size_t size() const noexcept { return data_->rows(); }

private:
    const DataMatrix* data_;
    KernelParams params_;
    double penalty_c_;
    double outlier_fraction_ = 0.0;
};

struct SolverConfig {
    enum class Start {
        automatic,  // uniform for n <= uniform_start_limit, sparse otherwise
        uniform,
        sparse,
    };

    double kkt_tolerance = 1e-6;
    /// 0 selects the default cap max(100 n, 10000).
    std::size_t max_iterations = 0;
    Start start = Start::automatic;
    std::size_t uniform_start_limit = 4096;

    std::size_t iteration_cap(std::size_t n) const noexcept;
};

struct SolveResult {
    std::vector<double> alpha;
    /// Dual objective value at alpha.
    double objective = 0.0;
    std::size_t iterations = 0;
    /// max_{i: a_i < C} (-g_i) - min_{j: a_j > 0} (-g_j) for the gradient g of sum a_i a_j K_ij.
    double max_kkt_violation = 0.0;
    /// True when the solve stopped on the iteration cap rather than the tolerance.
    bool hit_iteration_cap = false;
};

/// Uniform feasible start: every a_i = 1/n (feasible because n C >= 1).
std::vector<double> initialize_alpha(const DualProblem& problem);

/// Sparse feasible start: the first floor(1/C) coordinates at C, the remainder on the next one.
std::vector<double> sparse_initial_alpha(const DualProblem& problem);

/// Dual objective evaluated directly from the Gram matrix, O(n^2). Independent of the solver's
/// incremental bookkeeping.
double dual_objective(const DualProblem& problem, const std::vector<double>& alpha);

/// Optional per-iteration observer, called with the objective after each pair update.
class SolverObserver {
public:
    virtual ~SolverObserver() = default;
    virtual void on_iteration(std::size_t iteration, double objective) = 0;
};

/// Sequential minimal optimization with maximal-violating-pair selection.
///
/// Stops when the KKT violation drops to config.kkt_tolerance or the iteration cap is
/// reached; the cap is reported through SolveResult::hit_iteration_cap, never thrown.
/// Throws NumericError when kernel values are not finite.
SolveResult solve_dual(const DualProblem& problem, const SolverConfig& config, KernelCache& cache,
                       SolverObserver* observer = nullptr);

/// Convenience overload owning a default-sized cache.
SolveResult solve_dual(const DualProblem& problem, const SolverConfig& config = {});

/// Called after every completed solve_dual, possibly from several threads at once.
using SolveAuditFn = void (*)(const DualProblem& problem, const SolverConfig& config, const SolveResult& result,
                             void* context);

/// Installs a process-wide audit callback (nullptr removes it). Meant for test harnesses that
/// check every solve, including those made inside the trainers.
void set_solve_audit(SolveAuditFn fn, void* context = nullptr) noexcept;

}  // namespace svdd
