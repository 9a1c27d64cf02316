#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <svdd/datagen.hpp>
#include <svdd/error.hpp>
#include <svdd/model.hpp>
#include <svdd/trainer_full.hpp>
#include <svdd/trainer_sampling.hpp>

using namespace svdd;

namespace {

TraceRecord rec(std::size_t i, double r2, std::vector<double> center) {
    TraceRecord r;
    r.iteration = i;
    r.r_squared = r2;
    r.center = std::move(center);
    return r;
}

bool contains_row(const DataMatrix& d, std::span<const double> row) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (std::equal(row.begin(), row.end(), d.row(i).begin())) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(SampleWithReplacement, Basics) {
    Rng rng(1);
    const DataMatrix one{{7.0, 8.0}};
    EXPECT_EQ(sample_with_replacement(one, 1, rng), one);
    EXPECT_THROW(sample_with_replacement(DataMatrix(0, 2), 3, rng), InputError);
    EXPECT_THROW(sample_with_replacement(one, 0, rng), InputError);

    const DataMatrix d = generate_shape(ShapeKind::star, 50, 1);
    Rng a(42);
    Rng b(42);
    EXPECT_EQ(sample_with_replacement(d, 20, a), sample_with_replacement(d, 20, b));
}

TEST(SampleWithReplacement, FrequenciesWithinThreeSigma) {
    const DataMatrix two{{0.0}, {1.0}};
    Rng rng(99);
    const DataMatrix s = sample_with_replacement(two, 10000, rng);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        ones += s(i, 0) == 1.0 ? 1 : 0;
    }
    // binomial(10000, 1/2): sigma = 50
    EXPECT_NEAR(static_cast<double>(ones), 5000.0, 150.0);
}

TEST(UnionDistinctRows, KeepsFirstOccurrence) {
    const DataMatrix d{{0.0}, {1.0}, {0.0}, {2.0}, {1.0}};
    const std::vector<std::size_t> first{1, 3};
    const std::vector<std::size_t> second{0, 4, 2, 3};
    EXPECT_EQ(union_distinct_rows(d, first, second), (std::vector<std::size_t>{1, 3, 0}));
    EXPECT_LE(union_distinct_rows(d, first, second).size(), first.size() + second.size());
}

TEST(SamplingConfig, Validation) {
    SamplingConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.resolved_sample_size(2), 3u);
    EXPECT_EQ(c.resolved_sample_size(0), 2u);
    c.sample_size = 6;
    EXPECT_EQ(c.resolved_sample_size(2), 6u);
    for (auto mutate : std::vector<std::function<void(SamplingConfig&)>>{
             [](SamplingConfig& x) { x.center_tolerance = 0.0; },
             [](SamplingConfig& x) { x.radius_tolerance = -1.0; },
             [](SamplingConfig& x) { x.consecutive = 0; },
             [](SamplingConfig& x) { x.max_iterations = 0; },
             [](SamplingConfig& x) { x.outlier_fraction = 0.0; },
             [](SamplingConfig& x) { x.outlier_fraction = 1.5; },
         }) {
        SamplingConfig bad;
        mutate(bad);
        EXPECT_THROW(bad.validate(), ConfigError);
    }
}

TEST(Convergence, ConstantTraceConvergesAfterT) {
    SamplingConfig c;
    c.consecutive = 3;
    TrainTrace t;
    for (std::size_t i = 1; i <= 4; ++i) {
        t.records.push_back(rec(i, 0.5, {1.0, 1.0}));
        // records 2..4 meet the criteria; three in a row first happens at record 4
        EXPECT_EQ(check_convergence(t, c), i == 4) << i;
    }
}

TEST(Convergence, FirstRecordNeverMeetsCriteria) {
    SamplingConfig c;
    c.consecutive = 1;
    TrainTrace t;
    t.records.push_back(rec(1, 0.5, {1.0}));
    EXPECT_FALSE(check_convergence(t, c));
}

TEST(Convergence, StreakResetsOnViolation) {
    SamplingConfig c;
    c.consecutive = 3;
    TrainTrace t;
    t.records = {rec(1, 0.5, {1.0}), rec(2, 0.5, {1.0}), rec(3, 0.5, {1.0}), rec(4, 0.6, {1.0}),
                 rec(5, 0.6, {1.0})};
    EXPECT_FALSE(check_convergence(t, c));
    t.records.push_back(rec(6, 0.6, {1.0}));
    EXPECT_FALSE(check_convergence(t, c));
    t.records.push_back(rec(7, 0.6, {1.0}));
    EXPECT_TRUE(check_convergence(t, c));
}

TEST(Convergence, OscillationOnlyStopsAtMaxIter) {
    SamplingConfig c;
    c.max_iterations = 50;
    TrainTrace t;
    for (std::size_t i = 1; i <= 50; ++i) {
        t.records.push_back(rec(i, i % 2 ? 0.5 : 0.55, {1.0}));
        EXPECT_EQ(check_convergence(t, c), i == 50);
    }
}

TEST(Convergence, CenterCriterionCanBeDisabled) {
    SamplingConfig c;
    const auto a = rec(1, 0.5, {1.0, 0.0});
    const auto b = rec(2, 0.5, {1.5, 0.0});
    EXPECT_FALSE(meets_convergence_criteria(a, b, c));
    c.check_center = false;
    EXPECT_TRUE(meets_convergence_criteria(a, b, c));
    // zero previous center uses a tiny floor instead of dividing by zero
    c.check_center = true;
    EXPECT_TRUE(meets_convergence_criteria(rec(1, 0.5, {0.0, 0.0}), rec(2, 0.5, {0.0, 0.0}), c));
    EXPECT_FALSE(meets_convergence_criteria(rec(1, 0.5, {0.0, 0.0}), rec(2, 0.5, {1e-6, 0.0}), c));
}

TEST(TrainSampling, IdenticalRowsConvergeInTPlusOne) {
    const DataMatrix d(50, 2, std::vector<double>(100, 3.0));
    SamplingConfig c;
    c.seed = 4;
    const auto r = train_sampling(d, KernelParams(1.0), c);
    EXPECT_EQ(r.trace.status, TrainStatus::converged);
    EXPECT_EQ(r.trace.records.size(), c.consecutive + 1);
    EXPECT_EQ(r.model.r_squared(), 0.0);
    EXPECT_EQ(r.model.support_vector_count(), 1u);
}

TEST(TrainSampling, DeterministicTrace) {
    const DataMatrix d = generate_shape(ShapeKind::banana, 2000, 5);
    SamplingConfig c;
    c.sample_size = 6;
    c.seed = 17;
    const auto a = train_sampling(d, KernelParams(1.0), c);
    const auto b = train_sampling(d, KernelParams(1.0), c);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.master_rows, b.master_rows);
    EXPECT_EQ(a.model.sv_alpha(), b.model.sv_alpha());
}

TEST(TrainSampling, TraceRecordsAreConsistent) {
    const DataMatrix d = generate_shape(ShapeKind::star, 3000, 2);
    SamplingConfig c;
    c.sample_size = 11;
    c.seed = 1;
    const auto r = train_sampling(d, KernelParams(1.0), c);
    ASSERT_FALSE(r.trace.records.empty());
    std::size_t streak = 0;
    for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
        const auto& rec = r.trace.records[i];
        EXPECT_EQ(rec.iteration, i + 1);
        if (i == 0) {
            EXPECT_FALSE(rec.criteria_met);
        } else {
            EXPECT_EQ(rec.criteria_met, meets_convergence_criteria(r.trace.records[i - 1], rec, c));
        }
        streak = rec.criteria_met ? streak + 1 : 0;
        EXPECT_EQ(rec.streak, streak);
        EXPECT_GE(rec.master_set_size, 1u);
    }
    EXPECT_EQ(r.trace.records.back().master_set_size, r.master_rows.size());
}

TEST(TrainSampling, PostConvergenceRadiusIsStable) {
    const DataMatrix d = generate_shape(ShapeKind::banana, 4000, 3);
    SamplingConfig c;
    c.sample_size = 6;
    c.seed = 8;
    const auto r = train_sampling(d, KernelParams(1.0), c);
    ASSERT_EQ(r.trace.status, TrainStatus::converged);
    const auto& recs = r.trace.records;
    for (std::size_t i = recs.size() - c.consecutive; i < recs.size(); ++i) {
        EXPECT_LE(std::abs(recs[i].r_squared - recs[i - 1].r_squared), c.radius_tolerance * recs[i - 1].r_squared);
    }
}

TEST(TrainSampling, MasterSetComesFromTrainingRows) {
    const DataMatrix d = generate_shape(ShapeKind::two_donut, 3000, 6);
    SamplingConfig c;
    c.sample_size = 11;
    c.seed = 2;
    const auto r = train_sampling(d, KernelParams(1.0), c);
    for (std::size_t i = 0; i < r.model.support_vector_count(); ++i) {
        EXPECT_TRUE(contains_row(d, r.model.support_vectors().row(i)));
    }
    for (std::size_t idx : r.master_rows) {
        EXPECT_LT(idx, d.rows());
    }
}

TEST(TrainSampling, NeverScoresDuringTraining) {
    const DataMatrix d = generate_shape(ShapeKind::banana, 3000, 1);
    reset_score_call_count();
    SamplingConfig c;
    c.sample_size = 6;
    train_sampling(d, KernelParams(1.0), c);
    EXPECT_EQ(score_call_count(), 0u);
}

TEST(TrainSampling, CloseToFullOnBanana) {
    const DataMatrix d = generate_shape(ShapeKind::banana, 3000, 11);
    const KernelParams k(1.0);
    const auto full = train_full(d, k, 0.001);
    SamplingConfig c;
    c.sample_size = 6;
    c.consecutive = 10;
    c.seed = 5;
    const auto samp = train_sampling(d, k, c);
    EXPECT_EQ(samp.trace.status, TrainStatus::converged);
    const double ratio = samp.model.r_squared() / full.model.r_squared();
    EXPECT_GE(ratio, 0.95);
    EXPECT_LE(ratio, 1.05);
    EXPECT_LE(samp.model.support_vector_count(), 5 * full.model.support_vector_count());
}

TEST(TrainSampling, SampleSizePenaltyBasis) {
    const DataMatrix d = generate_shape(ShapeKind::star, 2000, 9);
    SamplingConfig c;
    c.sample_size = 8;
    c.outlier_fraction = 0.1;
    c.penalty_basis = SamplingConfig::PenaltyBasis::sample_size;
    const auto r = train_sampling(d, KernelParams(1.0), c);
    EXPECT_GE(r.model.r_squared(), 0.0);
    EXPECT_FALSE(r.trace.records.empty());
}

TEST(WriteTraceCsv, HeaderAndRows) {
    TrainTrace t;
    t.records = {rec(1, 0.5, {1.0}), rec(2, 0.25, {1.0})};
    t.records[1].center_delta_norm = 0.125;
    t.records[1].master_set_size = 4;
    std::ostringstream os;
    write_trace_csv(os, t);
    EXPECT_EQ(os.str(), "iteration,r_squared,center_norm_delta,master_set_size\n1,0.5,0,0\n2,0.25,0.125,4\n");
}
