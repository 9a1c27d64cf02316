#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include <svdd/error.hpp>
#include <svdd/kernel.hpp>

#include "oracle.hpp"

using namespace svdd;

TEST(KernelParams, RejectsNonPositiveBandwidth) {
    EXPECT_THROW(KernelParams(0.0), ConfigError);
    EXPECT_THROW(KernelParams(-1.0), ConfigError);
    EXPECT_THROW(KernelParams{std::numeric_limits<double>::infinity()}, ConfigError);
    EXPECT_THROW(KernelParams{std::nan("")}, ConfigError);
    EXPECT_DOUBLE_EQ(KernelParams(2.0).gamma(), 0.125);
}

TEST(GaussianKernel, KnownValues) {
    const KernelParams p(1.0);
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{2.0, 0.0};
    EXPECT_EQ(gaussian_kernel(a, a, p), 1.0);
    EXPECT_NEAR(gaussian_kernel(a, b, p), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(gaussian_kernel(a, b, p), 0.135335, 1e-6);
}

TEST(GaussianKernel, ApproachesOneAsBandwidthGrows) {
    const std::vector<double> x{0.0};
    const std::vector<double> y{1.0};
    double prev = 0.0;
    for (double s : {0.5, 1.0, 2.0, 10.0, 100.0, 1e4}) {
        const double k = gaussian_kernel(x, y, KernelParams(s));
        EXPECT_GT(k, prev);
        prev = k;
    }
    EXPECT_NEAR(prev, 1.0, 1e-8);
}

TEST(GaussianKernel, DimensionMismatchThrows) {
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{1.0};
    EXPECT_THROW(gaussian_kernel(a, b, KernelParams(1.0)), InputError);
}

TEST(GaussianKernel, SymmetricAndInRange) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> x(3);
        std::vector<double> y(3);
        for (int j = 0; j < 3; ++j) {
            x[j] = nd(rng);
            y[j] = nd(rng);
        }
        const KernelParams p(0.5 + trial % 5);
        const double kxy = gaussian_kernel(x, y, p);
        EXPECT_EQ(kxy, gaussian_kernel(y, x, p));
        EXPECT_GT(kxy, 0.0);
        EXPECT_LT(kxy, 1.0);
    }
}

TEST(GramMatrix, PositiveSemidefiniteOnRandomSets) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const std::size_t m = 1 + trial % 3;
        DataMatrix d(n, m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                d(i, j) = u(rng);
            }
        }
        const auto g = gram_matrix(d, KernelParams(0.3 + 0.5 * (trial % 4)));
        EXPECT_GE(svdd::testing::min_eigenvalue(g, n), -1e-10);
    }
}

TEST(KernelRow, DiagonalAndKnownRow) {
    const DataMatrix d{{0.0, 0.0}, {2.0, 0.0}};
    const KernelParams p(1.0);
    const auto row = kernel_row(0, d, p);
    ASSERT_EQ(row.size(), 2u);
    EXPECT_EQ(row[0], 1.0);
    EXPECT_NEAR(row[1], std::exp(-2.0), 1e-15);
    EXPECT_THROW(kernel_row(2, d, p), InputError);
}

TEST(KernelCache, RowsMatchFreshComputationBitwise) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    DataMatrix d(40, 2);
    for (std::size_t i = 0; i < 40; ++i) {
        d(i, 0) = u(rng);
        d(i, 1) = u(rng);
    }
    const KernelParams p(1.3);
    KernelCache cache(d, p, 5);
    std::uniform_int_distribution<std::size_t> pick(0, 39);
    for (int t = 0; t < 300; ++t) {
        const std::size_t i = pick(rng);
        const std::vector<double> fresh = kernel_row(i, d, p);
        EXPECT_EQ(kernel_row(i, cache), fresh);
        EXPECT_LE(cache.size(), cache.capacity());
    }
    EXPECT_GT(cache.hits(), 0u);
    EXPECT_GT(cache.misses(), 0u);
}

TEST(KernelCache, EvictsLeastRecentlyUsed) {
    const DataMatrix d{{0.0}, {1.0}, {2.0}};
    KernelCache cache(d, KernelParams(1.0), 2);
    cache.row(0);
    cache.row(1);
    cache.row(0);  // 1 is now least recent
    cache.row(2);  // evicts 1
    const std::size_t misses = cache.misses();
    cache.row(0);
    EXPECT_EQ(cache.misses(), misses);
    cache.row(1);
    EXPECT_EQ(cache.misses(), misses + 1);
    EXPECT_THROW(cache.row(3), InputError);
}

TEST(KernelCache, DefaultCapacity) {
    EXPECT_EQ(default_cache_capacity(1), 1u);
    EXPECT_EQ(default_cache_capacity(10), 10u);
    EXPECT_EQ(default_cache_capacity(5000), 4096u);
    // 100k rows at 8 bytes each: a 256 MiB budget holds 335 rows
    EXPECT_EQ(default_cache_capacity(100000), (std::size_t{256} << 20) / (8 * 100000));
    EXPECT_GE(default_cache_capacity(100000000), 2u);
}
