#include "svdd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svdd/error.hpp"

namespace svdd {

KernelParams::KernelParams(double bandwidth) : bandwidth_(bandwidth), gamma_(0.0) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("kernel bandwidth s must be positive and finite, got " + std::to_string(bandwidth));
    }
    gamma_ = 1.0 / (2.0 * bandwidth * bandwidth);
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InputError("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        acc += d * d;
    }
    return acc;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y, const KernelParams& params) {
    return std::exp(-squared_distance(x, y) * params.gamma());
}

std::vector<double> gram_matrix(const DataMatrix& data, const KernelParams& params) {
    const std::size_t n = data.rows();
    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        gram[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = gaussian_kernel(data.row(i), data.row(j), params);
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    return gram;
}

std::size_t default_cache_capacity(std::size_t n, std::size_t byte_budget) {
    if (n < 2) {
        return std::max<std::size_t>(n, 1);
    }
    const std::size_t by_budget = byte_budget / (n * sizeof(double));
    return std::max<std::size_t>(2, std::min({n, std::size_t{4096}, by_budget}));
}

KernelCache::KernelCache(const DataMatrix& data, const KernelParams& params, std::size_t capacity_rows)
    : data_(&data), params_(params), capacity_(capacity_rows) {
    if (capacity_rows == 0) {
        throw ConfigError("KernelCache: capacity must be at least one row");
    }
}

void KernelCache::compute_row(std::size_t i, std::vector<double>& out) const {
    const std::size_t n = data_->rows();
    out.resize(n);
    const auto xi = data_->row(i);
    const double gamma = params_.gamma();
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = std::exp(-squared_distance(xi, data_->row(j)) * gamma);
    }
}

const std::vector<double>& KernelCache::row(std::size_t i) {
    if (i >= data_->rows()) {
        throw InputError("kernel_row: index " + std::to_string(i) + " out of range for " +
                         std::to_string(data_->rows()) + " rows");
    }
    if (auto it = lookup_.find(i); it != lookup_.end()) {
        ++hits_;
        entries_.splice(entries_.begin(), entries_, it->second);
        return it->second->values;
    }
    ++misses_;
    if (entries_.size() >= capacity_) {
        // Reuse the evicted row's storage.
        auto last = std::prev(entries_.end());
        lookup_.erase(last->index);
        last->index = i;
        entries_.splice(entries_.begin(), entries_, last);
    } else {
        entries_.push_front(Entry{i, {}});
    }
    compute_row(i, entries_.front().values);
    lookup_[i] = entries_.begin();
    return entries_.front().values;
}

std::vector<double> kernel_row(std::size_t i, const DataMatrix& data, const KernelParams& params) {
    if (i >= data.rows()) {
        throw InputError("kernel_row: index " + std::to_string(i) + " out of range for " +
                         std::to_string(data.rows()) + " rows");
    }
    std::vector<double> out(data.rows());
    for (std::size_t j = 0; j < data.rows(); ++j) {
        out[j] = gaussian_kernel(data.row(i), data.row(j), params);
    }
    return out;
}

const std::vector<double>& kernel_row(std::size_t i, KernelCache& cache) { return cache.row(i); }

}  // namespace svdd
