#include "svdd/eval.hpp"

#include "svdd/error.hpp"

namespace svdd {

EvalReport f1_measure(const std::vector<bool>& predicted, const std::vector<bool>& actual) {
    if (predicted.size() != actual.size()) {
        throw InputError("f1_measure: predicted and actual lengths differ");
    }
    if (predicted.empty()) {
        throw InputError("f1_measure: inputs are empty");
    }
    EvalReport r;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i]) {
            actual[i] ? ++r.true_positives : ++r.false_positives;
        } else {
            actual[i] ? ++r.false_negatives : ++r.true_negatives;
        }
    }
    const auto tp = static_cast<double>(r.true_positives);
    const std::size_t predicted_pos = r.true_positives + r.false_positives;
    const std::size_t actual_pos = r.true_positives + r.false_negatives;
    if (predicted_pos > 0) {
        r.precision = tp / static_cast<double>(predicted_pos);
    } else {
        r.degenerate = true;
    }
    if (actual_pos > 0) {
        r.recall = tp / static_cast<double>(actual_pos);
    } else {
        r.degenerate = true;
    }
    if (r.precision + r.recall > 0.0) {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    } else {
        r.degenerate = true;
    }
    return r;
}

F1Ratio f1_ratio(const SvddModel& model_sampling, const SvddModel& model_full, const DataMatrix& score_data,
                 const std::vector<bool>& actual) {
    F1Ratio out;
    out.sampling = f1_measure(inside_flags(model_sampling, score_data), actual);
    out.full = f1_measure(inside_flags(model_full, score_data), actual);
    if (out.full.f1 > 0.0) {
        out.ratio = out.sampling.f1 / out.full.f1;
    }
    return out;
}

double grid_agreement(const SvddModel& model_a, const SvddModel& model_b, const GridSpec& grid) {
    if (model_a.dimension() != 2 || model_b.dimension() != 2) {
        throw InputError("grid_agreement: models must be two-dimensional");
    }
    const DataMatrix points = grid.points();
    if (points.empty()) {
        return 1.0;
    }
    const auto a = inside_flags(model_a, points);
    const auto b = inside_flags(model_b, points);
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same += (a[i] == b[i]) ? 1 : 0;
    }
    return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace svdd
