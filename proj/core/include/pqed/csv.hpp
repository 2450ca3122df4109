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

#pragma once

// Locale-independent number formatting and the repo-wide CSV conventions.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pqed::io {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_shortest(double value);

/// `digits` significant digits, %g-style, no locale.
std::string format_significant(double value, int digits);

/// Parses a double with the "C" locale; throws IoError on trailing junk.
double parse_double(std::string_view text);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

/// Matrix CSV: first row is the column axis (after a label cell), first
/// column is the row axis, the body holds values[row][col].
struct MatrixCsv {
    std::string corner_label;
    std::vector<double> row_axis;
    std::vector<double> column_axis;
    Eigen::MatrixXd values;
};

std::string format_matrix_csv(const MatrixCsv &m, int significant_digits);
MatrixCsv parse_matrix_csv(std::string_view text);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string_view> split_csv_line(std::string_view line);

} // namespace pqed::io
