// Copyright 2026 The phonon-qed Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pqed/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pqed/errors.hpp"

namespace pqed::io {

std::string format_shortest(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw IoError("format_shortest: conversion failed");
    }
    return std::string(buf, ptr);
}

std::string format_significant(double value, int digits) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
    if (ec != std::errc()) {
        throw IoError("format_significant: conversion failed");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw IoError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string format_matrix_csv(const MatrixCsv &m, int digits) {
    if (m.values.rows() != static_cast<Eigen::Index>(m.row_axis.size()) ||
        m.values.cols() != static_cast<Eigen::Index>(m.column_axis.size())) {
        throw InvalidInput("matrix csv: axis lengths do not match the body");
    }
    std::string out = m.corner_label;
    for (double c : m.column_axis) {
        out += ',';
        out += format_significant(c, digits);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
        out += format_significant(m.row_axis[static_cast<std::size_t>(i)], digits);
        for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
            out += ',';
            out += format_significant(m.values(i, j), digits);
        }
        out += '\n';
    }
    return out;
}

MatrixCsv parse_matrix_csv(std::string_view text) {
    MatrixCsv m;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (line_no == 0) {
            m.corner_label = std::string(cells.front());
            for (std::size_t c = 1; c < cells.size(); ++c) {
                m.column_axis.push_back(parse_double(cells[c]));
            }
        } else {
            if (cells.size() != m.column_axis.size() + 1) {
                throw IoError("matrix csv: line " + std::to_string(line_no + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(m.column_axis.size() + 1));
            }
            m.row_axis.push_back(parse_double(cells[0]));
            std::vector<double> row;
            row.reserve(cells.size() - 1);
            for (std::size_t c = 1; c < cells.size(); ++c) {
                const double v = parse_double(cells[c]);
                if (!std::isfinite(v)) {
                    throw IoError("matrix csv: non-finite value on line " +
                                  std::to_string(line_no + 1));
                }
                row.push_back(v);
            }
            rows.push_back(std::move(row));
        }
        ++line_no;
    }
    if (m.column_axis.empty() || rows.empty()) {
        throw IoError("matrix csv: empty matrix");
    }
    m.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(m.column_axis.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

} // namespace pqed::io
