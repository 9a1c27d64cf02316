#include <cmath>
#include <random>
#include <span>

#include <gtest/gtest.h>

#include <svdd/error.hpp>
#include <svdd/kernel.hpp>
#include <svdd/model.hpp>
#include <svdd/qp_solver.hpp>

using namespace svdd;

namespace {

DataMatrix cloud(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    DataMatrix d(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, 0) = nd(rng);
        d(i, 1) = 0.5 * nd(rng);
    }
    return d;
}

SvddModel train(const DataMatrix& d, double s, double c, double tol = 1e-6) {
    const DualProblem p(d, KernelParams(s), c);
    SolverConfig cfg;
    cfg.kkt_tolerance = tol;
    return build_model(p, solve_dual(p, cfg));
}

// dist^2 using every training row, including the zero weights the model pruned.
double unpruned_distance(const DataMatrix& d, const std::vector<double>& alpha, const KernelParams& k,
                         std::span<const double> z) {
    double cross = 0.0;
    double self = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        cross += alpha[i] * gaussian_kernel(d.row(i), z, k);
        for (std::size_t j = 0; j < d.rows(); ++j) {
            self += alpha[i] * alpha[j] * gaussian_kernel(d.row(i), d.row(j), k);
        }
    }
    return 1.0 - 2.0 * cross + self;
}

}  // namespace

TEST(BuildModel, TwoPointClosedForm) {
    const DataMatrix d{{0.0, 0.0}, {2.0, 0.0}};
    const SvddModel m = train(d, 1.0, 1.0);
    const double g = std::exp(-2.0);
    ASSERT_EQ(m.support_vector_count(), 2u);
    EXPECT_NEAR(m.sv_alpha()[0], 0.5, 1e-8);
    EXPECT_NEAR(m.sv_alpha()[1], 0.5, 1e-8);
    EXPECT_NEAR(m.r_squared(), (1.0 - g) / 2.0, 1e-8);
    EXPECT_NEAR(m.r_squared(), 0.432332, 1e-6);
    EXPECT_FALSE(m.radius_fallback());
    EXPECT_NEAR(m.center()[0], 1.0, 1e-8);

    const std::vector<double> mid{1.0, 0.0};
    const auto s = score(m, mid);
    EXPECT_NEAR(s.dist_squared, 1.0 - 2.0 * std::exp(-0.5) + (1.0 + g) / 2.0, 1e-12);
    EXPECT_NEAR(s.dist_squared, 0.354606, 1e-6);
    EXPECT_FALSE(s.is_outlier);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(score(m, d.row(k)).dist_squared, m.r_squared(), 1e-9);
    }
}

TEST(BuildModel, SinglePoint) {
    const DataMatrix d{{1.5, -2.0}};
    const SvddModel m = train(d, 1.0, 1.0);
    EXPECT_EQ(m.r_squared(), 0.0);
    EXPECT_EQ(m.center(), (std::vector<double>{1.5, -2.0}));
    const auto s = score(m, d.row(0));
    EXPECT_EQ(s.dist_squared, 0.0);
    EXPECT_FALSE(s.is_outlier);
}

TEST(BuildModel, AllAtBoundFallsBack) {
    const DataMatrix d{{0.0, 0.0}, {2.0, 0.0}};
    const SvddModel m = train(d, 1.0, 0.5);
    EXPECT_TRUE(m.radius_fallback());
    EXPECT_NEAR(m.r_squared(), (1.0 - std::exp(-2.0)) / 2.0, 1e-12);
}

TEST(BuildModel, BoundarySupportVectorsScoreOnTheSphere) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DataMatrix d = cloud(60, seed);
        const double c = 1.0 / (60 * 0.05);
        const DualProblem p(d, KernelParams(1.0), c);
        SolverConfig cfg;
        cfg.kkt_tolerance = 1e-12;
        const auto r = solve_dual(p, cfg);
        const SvddModel m = build_model(p, r);
        std::size_t boundary = 0;
        for (std::size_t i = 0; i < d.rows(); ++i) {
            if (r.alpha[i] > 1e-8 && r.alpha[i] < c * (1 - 1e-8)) {
                ++boundary;
                EXPECT_NEAR(score(m, d.row(i)).dist_squared, m.r_squared(), 1e-9);
            }
        }
        EXPECT_GT(boundary, 0u);
    }
}

TEST(BuildModel, ThresholdConsistencyAtDefaultTolerance) {
    const DataMatrix d = cloud(300, 7);
    const double c = 1.0 / (300 * 0.02);
    const DualProblem p(d, KernelParams(0.8), c);
    const auto r = solve_dual(p);
    const SvddModel m = build_model(p, r);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const double a = r.alpha[i];
        const double d2 = score(m, d.row(i)).dist_squared;
        if (a > 1e-8 && a < c * (1 - 1e-8)) {
            EXPECT_NEAR(d2, m.r_squared(), 1e-6);
        } else if (a <= 1e-8) {
            // interior points: not outside the sphere beyond tolerance
            EXPECT_LE(d2, m.r_squared() + 1e-6);
        } else {
            EXPECT_GE(d2, m.r_squared() - 1e-6);
        }
    }
}

TEST(BuildModel, TrainingOutlierShareNearF) {
    const std::size_t n = 2000;
    const double f = 0.05;
    const DataMatrix d = cloud(n, 3);
    const SvddModel m = train(d, 1.0, 1.0 / (n * f));
    std::size_t outside = 0;
    for (const auto& s : score_batch(m, d)) {
        outside += s.is_outlier ? 1 : 0;
    }
    EXPECT_LE(static_cast<double>(outside) / n, f + 2.0 / std::sqrt(static_cast<double>(n)));
}

TEST(BuildModel, PruningZeroWeightsDoesNotMoveDistances) {
    const DataMatrix d = cloud(25, 9);
    const DualProblem p(d, KernelParams(1.0), 1.0 / (25 * 0.1));
    const auto r = solve_dual(p);
    const SvddModel m = build_model(p, r);
    EXPECT_LT(m.support_vector_count(), d.rows());
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const std::vector<double> z{u(rng), u(rng)};
        EXPECT_NEAR(score(m, z).dist_squared, unpruned_distance(d, r.alpha, p.params(), z), 1e-9);
    }
}

TEST(Score, PureAndOrderPreserving) {
    const SvddModel m = train(cloud(40, 2), 1.0, 1.0 / 4.0);
    const DataMatrix z = cloud(30, 8);
    const auto a = score_batch(m, z);
    const auto b = score_batch(m, z);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        EXPECT_EQ(a[i], score(m, z.row(i)));
        EXPECT_EQ(a[i].is_outlier, a[i].dist_squared > m.r_squared());
    }
    EXPECT_TRUE(score_batch(m, DataMatrix(0, 2)).empty());
}

TEST(Score, DimensionMismatchThrows) {
    const SvddModel m = train(cloud(10, 2), 1.0, 1.0);
    const std::vector<double> z{1.0, 2.0, 3.0};
    EXPECT_THROW(score(m, z), InputError);
    EXPECT_THROW(score_batch(m, DataMatrix(2, 3)), InputError);
}

TEST(Score, CallCounter) {
    const SvddModel m = train(cloud(10, 2), 1.0, 1.0);
    reset_score_call_count();
    score_batch(m, cloud(7, 1));
    EXPECT_EQ(score_call_count(), 7u);
    reset_score_call_count();
    EXPECT_EQ(score_call_count(), 0u);
}

TEST(SvddModel, ValidatesInvariants) {
    SvddModel::Parts ok;
    ok.support_vectors = DataMatrix{{0.0, 0.0}};
    ok.sv_alpha = {1.0};
    ok.center = {0.0, 0.0};
    ok.training_n = 1;
    EXPECT_NO_THROW(SvddModel{ok});

    auto bad = ok;
    bad.sv_alpha = {0.9};
    EXPECT_THROW(SvddModel{bad}, InputError);
    bad = ok;
    bad.r_squared = -0.1;
    EXPECT_THROW(SvddModel{bad}, InputError);
    bad = ok;
    bad.self_term = 1.5;
    EXPECT_THROW(SvddModel{bad}, InputError);
    bad = ok;
    bad.center = {0.0};
    EXPECT_THROW(SvddModel{bad}, InputError);
    bad = ok;
    bad.support_vectors = DataMatrix(0, 2);
    bad.sv_alpha = {};
    EXPECT_THROW(SvddModel{bad}, InputError);
}
