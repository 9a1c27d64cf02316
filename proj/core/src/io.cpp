#include "svdd/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "svdd/error.hpp"

namespace svdd {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        return std::nullopt;
    }
    return value;
}

std::optional<bool> parse_label(std::string_view cell) {
    if (cell == "1" || cell == "true" || cell == "TRUE" || cell == "True") {
        return true;
    }
    if (cell == "0" || cell == "false" || cell == "FALSE" || cell == "False") {
        return false;
    }
    if (auto v = parse_number(cell)) {
        if (*v == 1.0) {
            return true;
        }
        if (*v == 0.0) {
            return false;
        }
    }
    return std::nullopt;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::vector<double> numbers_from(const json& doc, const char* key) {
    const json& node = doc.at(key);
    if (!node.is_array()) {
        throw LoadError(std::string("model file: '") + key + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) {
            throw LoadError(std::string("model file: '") + key + "' must hold numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw InputError("format_double: value could not be formatted");
    }
    return std::string(buf.data(), ptr);
}

Dataset read_csv(std::istream& in, const CsvOptions& options) {
    Dataset out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_cols = 0;
    bool header_resolved = options.header == CsvOptions::Header::absent;
    bool has_label = false;
    std::vector<double> values;
    std::vector<bool> labels;
    std::size_t rows = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        if (!header_resolved) {
            header_resolved = true;
            bool is_header = options.header == CsvOptions::Header::present;
            if (!is_header) {
                for (auto c : cells) {
                    if (!parse_number(c)) {
                        is_header = true;
                        break;
                    }
                }
            }
            if (is_header) {
                for (auto c : cells) {
                    out.column_names.emplace_back(c);
                }
                if (!out.column_names.empty() && out.column_names.back() == "label") {
                    has_label = true;
                    out.column_names.pop_back();
                }
                expected_cols = cells.size();
                continue;
            }
        }
        if (expected_cols == 0) {
            expected_cols = cells.size();
        }
        if (cells.size() != expected_cols) {
            throw ParseError("csv: expected " + std::to_string(expected_cols) + " columns, found " +
                                 std::to_string(cells.size()),
                             line_no, std::min(cells.size(), expected_cols) + 1);
        }
        const std::size_t feature_cols = has_label ? expected_cols - 1 : expected_cols;
        for (std::size_t c = 0; c < feature_cols; ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                throw ParseError("csv: non-numeric cell '" + std::string(cells[c]) + "'", line_no, c + 1);
            }
            values.push_back(*v);
        }
        if (has_label) {
            const auto l = parse_label(cells.back());
            if (!l) {
                throw ParseError("csv: label must be 0/1/true/false, got '" + std::string(cells.back()) + "'",
                                 line_no, expected_cols);
            }
            labels.push_back(*l);
        }
        ++rows;
    }
    if (rows == 0 && expected_cols == 0) {
        throw InputError("csv: input is empty");
    }
    const std::size_t feature_cols = has_label ? expected_cols - 1 : expected_cols;
    out.features = DataMatrix(rows, feature_cols, std::move(values));
    if (has_label) {
        out.labels = std::move(labels);
    }
    return out;
}

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options) {
    auto in = open_in(path);
    return read_csv(in, options);
}

std::vector<std::string> default_column_names(std::size_t cols) {
    if (cols == 2) {
        return {"x", "y"};
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < cols; ++c) {
        names.push_back("x" + std::to_string(c));
    }
    return names;
}

void write_csv(std::ostream& out, const DataMatrix& data, const std::vector<std::string>& header,
               const std::vector<bool>* labels) {
    if (labels != nullptr && labels->size() != data.rows()) {
        throw InputError("write_csv: label count does not match row count");
    }
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            out << (c ? "," : "") << header[c];
        }
        if (labels != nullptr) {
            out << ",label";
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto r = data.row(i);
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << (c ? "," : "") << format_double(r[c]);
        }
        if (labels != nullptr) {
            out << ',' << ((*labels)[i] ? 1 : 0);
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const DataMatrix& data, const std::vector<std::string>& header,
               const std::vector<bool>* labels) {
    auto out = open_out(path);
    write_csv(out, data, header, labels);
    if (!out) {
        throw InputError("write_csv: failed writing '" + path.string() + "'");
    }
}

void write_model(std::ostream& out, const SvddModel& model) {
    json doc;
    doc["format"] = "svdd-model";
    doc["version"] = kModelFormatVersion;
    doc["dimension"] = model.dimension();
    doc["support_vector_count"] = model.support_vector_count();
    doc["bandwidth"] = model.params().bandwidth();
    doc["penalty_c"] = model.penalty_c();
    doc["outlier_fraction"] = model.outlier_fraction();
    doc["r_squared"] = model.r_squared();
    doc["self_term"] = model.self_term();
    doc["training_n"] = model.training_n();
    doc["radius_fallback"] = model.radius_fallback();
    doc["center"] = model.center();
    doc["support_vectors"] = model.support_vectors().values();
    doc["alpha"] = model.sv_alpha();
    out << doc.dump(2) << '\n';
}

void write_model(const std::filesystem::path& path, const SvddModel& model) {
    auto out = open_out(path);
    write_model(out, model);
    if (!out) {
        throw InputError("write_model: failed writing '" + path.string() + "'");
    }
}

SvddModel read_model(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw LoadError(std::string("model file: malformed or truncated (") + e.what() + ")");
    }
    try {
        if (doc.at("format").get<std::string>() != "svdd-model") {
            throw LoadError("model file: not an svdd-model document");
        }
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw LoadError("model file: unsupported version " + std::to_string(version));
        }
        const auto m = doc.at("dimension").get<std::size_t>();
        const auto nsv = doc.at("support_vector_count").get<std::size_t>();
        auto sv = numbers_from(doc, "support_vectors");
        if (sv.size() != m * nsv) {
            throw LoadError("model file: support vector block has the wrong size");
        }
        SvddModel::Parts parts;
        parts.support_vectors = DataMatrix(nsv, m, std::move(sv));
        parts.sv_alpha = numbers_from(doc, "alpha");
        parts.params = KernelParams(doc.at("bandwidth").get<double>());
        parts.penalty_c = doc.at("penalty_c").get<double>();
        parts.outlier_fraction = doc.at("outlier_fraction").get<double>();
        parts.r_squared = doc.at("r_squared").get<double>();
        parts.self_term = doc.at("self_term").get<double>();
        parts.center = numbers_from(doc, "center");
        parts.training_n = doc.at("training_n").get<std::size_t>();
        parts.radius_fallback = doc.at("radius_fallback").get<bool>();
        return SvddModel(std::move(parts));
    } catch (const LoadError&) {
        throw;
    } catch (const json::exception& e) {
        throw LoadError(std::string("model file: missing or mistyped field (") + e.what() + ")");
    } catch (const Error& e) {
        throw LoadError(std::string("model file: invalid model (") + e.what() + ")");
    }
}

SvddModel read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError("cannot open model file '" + path.string() + "'");
    }
    return read_model(in);
}

}  // namespace svdd
