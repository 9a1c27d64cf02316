#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svdd/data_matrix.hpp"
#include "svdd/model.hpp"

namespace svdd {

/// Shortest decimal text that parses back to exactly `value` ('.' decimal point, no locale).
std::string format_double(double value);

struct CsvOptions {
    enum class Header {
        detect,   // first line is a header when any cell is not a number
        present,
        absent,
    };
    Header header = Header::detect;
};

struct Dataset {
    DataMatrix features;
    /// Present when the header's last column is named "label" (values 0/1/true/false).
    std::optional<std::vector<bool>> labels;
    /// Feature column names; empty when the file had no header.
    std::vector<std::string> column_names;
};

/// Parses comma-separated numeric rows.
/// Throws InputError for an empty file and ParseError (with row/column) for ragged rows or
/// non-numeric cells.
Dataset read_csv(std::istream& in, const CsvOptions& options = {});
Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes an optional header line then one row per observation, full precision.
void write_csv(std::ostream& out, const DataMatrix& data, const std::vector<std::string>& header = {},
               const std::vector<bool>* labels = nullptr);
void write_csv(const std::filesystem::path& path, const DataMatrix& data, const std::vector<std::string>& header = {},
               const std::vector<bool>* labels = nullptr);

/// Default column names x0, x1, ... (or x, y for two columns).
std::vector<std::string> default_column_names(std::size_t cols);

inline constexpr int kModelFormatVersion = 1;

/// Self-describing JSON model document.
void write_model(std::ostream& out, const SvddModel& model);
void write_model(const std::filesystem::path& path, const SvddModel& model);

/// Throws LoadError on malformed or truncated input, a version mismatch or an invariant violation.
SvddModel read_model(std::istream& in);
SvddModel read_model(const std::filesystem::path& path);

}  // namespace svdd
