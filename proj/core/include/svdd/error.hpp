#pragma once

#include <stdexcept>
#include <string>

namespace svdd {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad caller-supplied data: dimension mismatch, index out of range, empty input.
class InputError : public Error {
public:
    using Error::Error;
};

// Parameters that cannot describe a valid problem (s <= 0, n*C < 1, p > n, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Non-finite values reached the solver.
class NumericError : public Error {
public:
    using Error::Error;
};

// CSV syntax problems. Carries the 1-based row and column of the offending cell.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

// Model file could not be loaded (version, truncation, invariant violation).
class LoadError : public Error {
public:
    using Error::Error;
};

}  // namespace svdd
