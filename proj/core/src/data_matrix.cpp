#include "svdd/data_matrix.hpp"

#include <algorithm>
#include <cstring>

#include "svdd/error.hpp"

namespace svdd {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw InputError("DataMatrix: value count does not match rows * cols");
    }
}

DataMatrix::DataMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    for (const auto& r : rows) {
        append_row(std::span<const double>(r.begin(), r.size()));
    }
}

void DataMatrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    } else if (values.size() != cols_) {
        throw InputError("DataMatrix: appended row has " + std::to_string(values.size()) +
                         " columns, expected " + std::to_string(cols_));
    }
    values_.insert(values_.end(), values.begin(), values.end());
    ++rows_;
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * cols_);
    for (std::size_t idx : indices) {
        if (idx >= rows_) {
            throw InputError("DataMatrix: row index " + std::to_string(idx) + " out of range");
        }
        auto r = row(idx);
        out.insert(out.end(), r.begin(), r.end());
    }
    return DataMatrix(indices.size(), cols_, std::move(out));
}

bool rows_bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace svdd
