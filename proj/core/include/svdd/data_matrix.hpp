#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace svdd {

/// Dense row-major matrix of observations: one row per observation, one column per feature.
class DataMatrix {
public:
    DataMatrix() = default;

    /// Zero-filled rows x cols matrix.
    DataMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major values; values.size() must equal rows * cols.
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    /// Literal construction for tests and small fixtures: {{x0, y0}, {x1, y1}, ...}.
    DataMatrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }

    /// Appends a row. The first row appended to an empty 0-column matrix fixes the width.
    void append_row(std::span<const double> values);

    /// New matrix made of the listed rows, in order (duplicates allowed).
    DataMatrix select_rows(std::span<const std::size_t> indices) const;

    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// True when the two rows hold bit-identical values (so -0.0 != 0.0 and NaN payloads matter).
bool rows_bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace svdd
