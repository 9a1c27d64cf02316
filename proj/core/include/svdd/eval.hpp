#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/datagen.hpp"
#include "svdd/model.hpp"

namespace svdd {

/// Confusion counts and F1 with the positive class = inside (target/normal).
struct EvalReport {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t true_negatives = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Some ratio had a zero denominator and was reported as 0.
    bool degenerate = false;
};

/// Throws InputError when the lengths differ or are zero.
EvalReport f1_measure(const std::vector<bool>& predicted, const std::vector<bool>& actual);

struct F1Ratio {
    EvalReport sampling;
    EvalReport full;
    /// F1(sampling) / F1(full); empty when F1(full) == 0.
    std::optional<double> ratio;
};

/// Scores `score_data` with both models and compares their F1 against `actual`.
F1Ratio f1_ratio(const SvddModel& model_sampling, const SvddModel& model_full, const DataMatrix& score_data,
                 const std::vector<bool>& actual);

/// Fraction of grid cell centers that both models label the same way.
double grid_agreement(const SvddModel& model_a, const SvddModel& model_b, const GridSpec& grid);

}  // namespace svdd
