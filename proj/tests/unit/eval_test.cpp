#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <svdd/datagen.hpp>
#include <svdd/error.hpp>
#include <svdd/eval.hpp>
#include <svdd/trainer_full.hpp>

using namespace svdd;

TEST(F1Measure, PerfectPrediction) {
    const std::vector<bool> y{true, false, true, true, false};
    const EvalReport r = f1_measure(y, y);
    EXPECT_EQ(r.f1, 1.0);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);
    EXPECT_FALSE(r.degenerate);
}

TEST(F1Measure, KnownCounts) {
    // TP 8, FP 2, FN 4, TN 6
    std::vector<bool> pred;
    std::vector<bool> actual;
    auto add = [&](bool p, bool a, int times) {
        for (int i = 0; i < times; ++i) {
            pred.push_back(p);
            actual.push_back(a);
        }
    };
    add(true, true, 8);
    add(true, false, 2);
    add(false, true, 4);
    add(false, false, 6);
    const EvalReport r = f1_measure(pred, actual);
    EXPECT_EQ(r.true_positives, 8u);
    EXPECT_EQ(r.false_positives, 2u);
    EXPECT_EQ(r.false_negatives, 4u);
    EXPECT_EQ(r.true_negatives, 6u);
    EXPECT_DOUBLE_EQ(r.precision, 0.8);
    EXPECT_DOUBLE_EQ(r.recall, 8.0 / 12.0);
    EXPECT_DOUBLE_EQ(r.f1, 8.0 / 11.0);
}

TEST(F1Measure, DegenerateAndErrors) {
    const std::vector<bool> none(5, false);
    const EvalReport r = f1_measure(none, none);
    EXPECT_EQ(r.f1, 0.0);
    EXPECT_TRUE(r.degenerate);
    EXPECT_THROW(f1_measure({true}, {true, false}), InputError);
    EXPECT_THROW(f1_measure({}, {}), InputError);
}

TEST(F1Measure, PermutationInvariant) {
    std::mt19937_64 rng(4);
    std::bernoulli_distribution coin(0.6);
    std::vector<bool> p(200);
    std::vector<bool> a(200);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = coin(rng);
        a[i] = coin(rng);
    }
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> pp(p.size());
    std::vector<bool> ap(p.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        pp[i] = p[perm[i]];
        ap[i] = a[perm[i]];
    }
    EXPECT_EQ(f1_measure(p, a).f1, f1_measure(pp, ap).f1);
}

class ModelPair : public ::testing::Test {
protected:
    void SetUp() override {
        poly_ = generate_polygon(8, 3.0, 5.0, 11);
        data_ = sample_polygon_interior(poly_, 200, 11);
    }
    Polygon poly_;
    DataMatrix data_;
};

TEST_F(ModelPair, RatioOfModelWithItselfIsOne) {
    const auto m = train_full(data_, KernelParams(2.0), 0.01).model;
    const LabeledGrid g = label_grid(poly_, 60);
    const F1Ratio r = f1_ratio(m, m, g.grid.points(), g.labels);
    ASSERT_TRUE(r.ratio.has_value());
    EXPECT_EQ(*r.ratio, 1.0);
    EXPECT_EQ(r.sampling.f1, r.full.f1);
    EXPECT_GT(r.full.f1, 0.5);
}

TEST_F(ModelPair, DegenerateSamplingGivesZeroRatio) {
    const auto full = train_full(data_, KernelParams(2.0), 0.01).model;
    // a tiny description far from the polygon labels nothing inside
    const auto far = train_full(DataMatrix{{100.0, 100.0}}, KernelParams(0.1), 0.01).model;
    const LabeledGrid g = label_grid(poly_, 40);
    const F1Ratio r = f1_ratio(far, full, g.grid.points(), g.labels);
    ASSERT_TRUE(r.ratio.has_value());
    EXPECT_EQ(*r.ratio, 0.0);
    EXPECT_TRUE(r.sampling.degenerate);
}

TEST_F(ModelPair, GridAgreementBounds) {
    const auto a = train_full(data_, KernelParams(2.0), 0.01).model;
    const auto b = train_full(data_, KernelParams(1.0), 0.01).model;
    const GridSpec grid{bounding_box(poly_), 50};
    EXPECT_EQ(grid_agreement(a, a, grid), 1.0);
    const double ab = grid_agreement(a, b, grid);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(ab, grid_agreement(b, a, grid));
}
