#pragma once

#include <cstddef>
#include <list>
#include <span>
#include <unordered_map>
#include <vector>

#include "svdd/data_matrix.hpp"

namespace svdd {

/// Gaussian kernel bandwidth `s`, in the same length units as the features.
class KernelParams {
public:
    /// Throws ConfigError unless bandwidth > 0 and finite.
    explicit KernelParams(double bandwidth);

    double bandwidth() const noexcept { return bandwidth_; }
    /// 1 / (2 s^2), the factor applied to the squared distance.
    double gamma() const noexcept { return gamma_; }

    friend bool operator==(const KernelParams&, const KernelParams&) = default;

private:
    double bandwidth_;
    double gamma_;
};

/// Squared Euclidean distance, accumulated in ascending index order.
/// Throws InputError on dimension mismatch.
double squared_distance(std::span<const double> x, std::span<const double> y);

/// exp(-||x - y||^2 / (2 s^2)). Symmetric bit-for-bit; 1.0 exactly when x == y.
double gaussian_kernel(std::span<const double> x, std::span<const double> y, const KernelParams& params);

/// Full Gaussian Gram matrix of `data`, row-major n x n. Intended for small n.
std::vector<double> gram_matrix(const DataMatrix& data, const KernelParams& params);

/// Default cache capacity: min(n, 4096) rows, further bounded so the cache stays
/// under `byte_budget` bytes (never below 2 rows, or n when n < 2).
std::size_t default_cache_capacity(std::size_t n, std::size_t byte_budget = std::size_t{256} << 20);

/// Least-recently-used cache of Gram-matrix rows for one data set.
///
/// Single owner. References returned by row() stay valid until that row is evicted,
/// which cannot happen before capacity() further distinct rows have been requested.
class KernelCache {
public:
    KernelCache(const DataMatrix& data, const KernelParams& params, std::size_t capacity_rows);

    /// Row i of the Gram matrix: row[j] = gaussian_kernel(x_i, x_j).
    /// Throws InputError when i is out of range.
    const std::vector<double>& row(std::size_t i);

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

    const DataMatrix& data() const noexcept { return *data_; }
    const KernelParams& params() const noexcept { return params_; }

private:
    struct Entry {
        std::size_t index;
        std::vector<double> values;
    };

    void compute_row(std::size_t i, std::vector<double>& out) const;

    const DataMatrix* data_;
    KernelParams params_;
    std::size_t capacity_;
    std::list<Entry> entries_;  // front = most recently used
    std::unordered_map<std::size_t, std::list<Entry>::iterator> lookup_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// Row i computed directly, bypassing any cache.
std::vector<double> kernel_row(std::size_t i, const DataMatrix& data, const KernelParams& params);

/// Row i through `cache` (which must have been built over `data`).
const std::vector<double>& kernel_row(std::size_t i, KernelCache& cache);

}  // namespace svdd
