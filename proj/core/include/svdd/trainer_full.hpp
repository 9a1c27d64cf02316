#pragma once

#include "svdd/data_matrix.hpp"
#include "svdd/kernel.hpp"
#include "svdd/model.hpp"
#include "svdd/qp_solver.hpp"

namespace svdd {

struct FullTrainResult {
    SvddModel model;
    std::size_t solver_iterations = 0;
    double max_kkt_violation = 0.0;
    bool hit_iteration_cap = false;
    /// Wall-clock seconds spent in the solve and model construction.
    double seconds = 0.0;
};

/// The baseline: one dual solve over every row, C = 1 / (n f).
FullTrainResult train_full(const DataMatrix& data, const KernelParams& params, double outlier_fraction,
                           const SolverConfig& config = {});

}  // namespace svdd
