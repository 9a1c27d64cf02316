#pragma once

#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/kernel.hpp"
#include "svdd/qp_solver.hpp"

namespace svdd {

struct ScoreOutcome {
    double dist_squared = 0.0;
    /// dist_squared > r_squared. A point exactly on the boundary is inside.
    bool is_outlier = false;

    friend bool operator==(const ScoreOutcome&, const ScoreOutcome&) = default;
};

struct ModelTolerances {
    /// alpha <= zero_tol is treated as zero (not a support vector).
    double alpha_zero_tol = 1e-8;
    /// alpha >= C - boundary_rel_tol * C is treated as at the upper bound.
    double alpha_boundary_rel_tol = 1e-8;
};

/// A trained SVDD description, ready for scoring. Immutable once built.
class SvddModel {
public:
    struct Parts {
        DataMatrix support_vectors;
        std::vector<double> sv_alpha;
        KernelParams params{1.0};
        double penalty_c = 1.0;
        double outlier_fraction = 0.0;  // 0 when C was supplied directly
        double r_squared = 0.0;
        double self_term = 1.0;
        std::vector<double> center;
        std::size_t training_n = 0;
        bool radius_fallback = false;
    };

    /// Validates the invariants (nsv >= 1, sum alpha = 1, R^2 >= 0, self_term in (0, 1], shapes).
    /// Throws InputError on violation.
    explicit SvddModel(Parts parts);

    const DataMatrix& support_vectors() const noexcept { return parts_.support_vectors; }
    const std::vector<double>& sv_alpha() const noexcept { return parts_.sv_alpha; }
    const KernelParams& params() const noexcept { return parts_.params; }
    double penalty_c() const noexcept { return parts_.penalty_c; }
    double outlier_fraction() const noexcept { return parts_.outlier_fraction; }
    double r_squared() const noexcept { return parts_.r_squared; }
    double self_term() const noexcept { return parts_.self_term; }
    const std::vector<double>& center() const noexcept { return parts_.center; }
    std::size_t training_n() const noexcept { return parts_.training_n; }
    /// R^2 came from the all-at-bound fallback rather than boundary support vectors.
    bool radius_fallback() const noexcept { return parts_.radius_fallback; }
    std::size_t dimension() const noexcept { return parts_.support_vectors.cols(); }
    std::size_t support_vector_count() const noexcept { return parts_.support_vectors.rows(); }

    const Parts& parts() const noexcept { return parts_; }

private:
    Parts parts_;
};

/// Extracts support vectors from a solved dual and computes R^2, the self term and the center.
///
/// R^2 is averaged over the boundary set { zero_tol < a_k < C(1 - boundary_rel_tol) }. When that
/// set is empty every support vector sits at C; R^2 then falls back to the largest kernel-space
/// distance among the support vectors and radius_fallback() is set.
SvddModel build_model(const DualProblem& problem, const SolveResult& result, const ModelTolerances& tol = {});

/// Squared kernel-space distance from z to the center of `model`:
/// K(z,z) - 2 sum a_i K(x_i, z) + sum_ij a_i a_j K(x_i, x_j).
double kernel_distance_squared(const SvddModel& model, std::span<const double> z);

/// Throws InputError on dimension mismatch.
ScoreOutcome score(const SvddModel& model, std::span<const double> z);

/// Row-by-row score, order preserved.
std::vector<ScoreOutcome> score_batch(const SvddModel& model, const DataMatrix& data);

/// Inside (not outlier) flags for every row of `data`.
std::vector<bool> inside_flags(const SvddModel& model, const DataMatrix& data);

/// Process-wide count of score() evaluations. Used to check that training never scores.
std::size_t score_call_count() noexcept;
void reset_score_call_count() noexcept;

}  // namespace svdd
