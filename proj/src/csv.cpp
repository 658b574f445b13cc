#include "ille/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ille {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col,
                  const std::filesystem::path& path) {
    const std::string_view t = trim(cell);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(path.string() + ": non-numeric cell at row " +
                         std::to_string(row) + ", column " + std::to_string(col) +
                         " (" + std::to_string(row) + "," + std::to_string(col) + ")");
    }
    return value;
}

std::vector<std::vector<double>> parse_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::string_view rest(line);
        std::size_t col = 0;
        while (true) {
            ++col;
            const std::size_t comma = rest.find(',');
            const std::string_view cell =
                comma == std::string_view::npos ? rest : rest.substr(0, comma);
            row.push_back(parse_cell(cell, lineno, col, path));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path.string() + ": row " + std::to_string(lineno) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": file has no data rows");
    return rows;
}

} // namespace

Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path) {
    const auto rows = parse_rows(path);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

void save_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j > 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw ParseError("write failed for " + path.string());
}

LabelVector load_labels_csv(const std::filesystem::path& path,
                            std::optional<Eigen::Index> expected_n) {
    const auto rows = parse_rows(path);
    if (rows.front().size() != 1) {
        throw ParseError(path.string() + ": label file must have exactly one column");
    }
    LabelVector lv;
    lv.labels.reserve(rows.size());
    bool any_unlabeled = false;
    int max_label = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = rows[i][0];
        const int iv = static_cast<int>(v);
        if (static_cast<double>(iv) != v || iv < -1) {
            throw ParseError(path.string() + ": row " + std::to_string(i + 1) +
                             ": labels must be integers >= -1");
        }
        if (iv == -1) any_unlabeled = true;
        max_label = std::max(max_label, iv);
        lv.labels.push_back(iv);
    }
    if (max_label < 0) {
        throw ParseError(path.string() + ": label file contains no labeled points");
    }
    lv.num_classes = max_label + 1;
    if (any_unlabeled) {
        lv.mask.resize(lv.labels.size());
        for (std::size_t i = 0; i < lv.labels.size(); ++i) {
            lv.mask[i] = lv.labels[i] >= 0 ? 1 : 0;
            if (lv.labels[i] < 0) lv.labels[i] = 0; // placeholder under the mask
        }
    }
    if (expected_n && lv.size() != *expected_n) {
        throw ParseError(path.string() + ": " + std::to_string(lv.size()) +
                         " labels but " + std::to_string(*expected_n) + " data rows");
    }
    return lv;
}

void save_labels_csv(const std::filesystem::path& path, const LabelVector& labels) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        out << (labels.is_labeled(i) ? labels.labels[i] : -1) << '\n';
    }
    if (!out) throw ParseError("write failed for " + path.string());
}

} // namespace ille
