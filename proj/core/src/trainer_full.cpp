#include "svdd/trainer_full.hpp"

#include <chrono>

namespace svdd {

FullTrainResult train_full(const DataMatrix& data, const KernelParams& params, double outlier_fraction,
                           const SolverConfig& config) {
    const auto problem = DualProblem::from_outlier_fraction(data, params, outlier_fraction);
    const auto start = std::chrono::steady_clock::now();
    KernelCache cache(data, params, default_cache_capacity(data.rows()));
    const SolveResult solved = solve_dual(problem, config, cache);
    SvddModel model = build_model(problem, solved);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return FullTrainResult{std::move(model), solved.iterations, solved.max_kkt_violation, solved.hit_iteration_cap,
                           elapsed.count()};
}

}  // namespace svdd
