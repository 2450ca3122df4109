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

#include "pqed/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pqed/csv.hpp"
#include "pqed/errors.hpp"

namespace pqed {

void SpectroscopyMap::validate() const {
    if (x_axis.empty() || freq_axis.empty()) {
        throw InvalidInput("spectroscopy map is empty");
    }
    if (amplitude.rows() != static_cast<Eigen::Index>(freq_axis.size()) ||
        amplitude.cols() != static_cast<Eigen::Index>(x_axis.size())) {
        throw InvalidInput("spectroscopy map dimensions do not match its axes");
    }
    if (!amplitude.allFinite()) {
        throw InvalidInput("spectroscopy map contains non-finite amplitudes");
    }
}

SpectroscopyMap parse_spectroscopy_csv(std::string_view text) {
    const auto m = io::parse_matrix_csv(text);
    SpectroscopyMap map;
    map.x_axis = m.column_axis;
    map.freq_axis = m.row_axis;
    map.amplitude = m.values;
    map.validate();
    return map;
}

std::string format_spectroscopy_csv(const SpectroscopyMap &map) {
    map.validate();
    io::MatrixCsv m;
    m.corner_label = "freq_hz/x";
    m.row_axis = map.freq_axis;
    m.column_axis = map.x_axis;
    m.values = map.amplitude;
    return io::format_matrix_csv(m, 12);
}

MaxValuePlot max_value_plot(const SpectroscopyMap &map) {
    if (map.amplitude.cols() == 0) {
        throw InvalidInput("max value plot: map rows are empty");
    }
    map.validate();
    MaxValuePlot plot;
    plot.freq_axis = map.freq_axis;
    plot.max_amplitude.resize(map.freq_axis.size());
    for (Eigen::Index i = 0; i < map.amplitude.rows(); ++i) {
        plot.max_amplitude[static_cast<std::size_t>(i)] = map.amplitude.row(i).maxCoeff();
    }
    return plot;
}

MaxValuePlot slice(const MaxValuePlot &plot, std::size_t first, std::size_t count) {
    if (first + count > plot.freq_axis.size()) {
        throw InvalidInput("max value plot slice out of range");
    }
    MaxValuePlot out;
    out.freq_axis.assign(plot.freq_axis.begin() + static_cast<std::ptrdiff_t>(first),
                         plot.freq_axis.begin() + static_cast<std::ptrdiff_t>(first + count));
    out.max_amplitude.assign(plot.max_amplitude.begin() + static_cast<std::ptrdiff_t>(first),
                             plot.max_amplitude.begin() +
                                 static_cast<std::ptrdiff_t>(first + count));
    return out;
}

MainFeature extract_main_feature(const MaxValuePlot &plot) {
    const auto &y = plot.max_amplitude;
    const auto &f = plot.freq_axis;
    if (y.size() != f.size()) {
        throw InvalidInput("max value plot axis and values differ in length");
    }
    if (y.size() < 16) {
        throw InvalidInput("max value plot needs at least 16 points");
    }
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*hi - *lo < 1e-12) {
        throw NumericalError("max value plot is flat: no feature to extract");
    }
    MainFeature out;
    out.index = static_cast<std::size_t>(lo - y.begin());
    out.frequency = f[out.index];
    const std::size_t k = out.index;
    if (k == 0 || k + 1 == y.size()) {
        out.low_confidence = true;
        return out;
    }
    // parabola through (f[k-1], y[k-1]), (f[k], y[k]), (f[k+1], y[k+1])
    const double x0 = f[k - 1] - f[k], x2 = f[k + 1] - f[k];
    const double d0 = y[k - 1] - y[k], d2 = y[k + 1] - y[k];
    const double den = x0 * x2 * (x0 - x2);
    if (den != 0.0) {
        const double a = (d0 * x2 - d2 * x0) / den;
        const double b = (d2 * x0 * x0 - d0 * x2 * x2) / den;
        if (a > 0.0) {
            const double shift = -b / (2.0 * a);
            out.frequency = f[k] + std::clamp(shift, x0, x2);
        }
    }
    return out;
}

VelocityFit fit_longitudinal_velocity(const std::vector<LabeledFeature> &features,
                                      double substrate_thickness_h) {
    if (features.size() < 2) {
        throw InvalidInput("velocity fit needs at least 2 features");
    }
    if (!(substrate_thickness_h > 0.0)) {
        throw InvalidInput("substrate thickness must be positive");
    }
    std::set<int> seen;
    for (const auto &p : features) {
        if (!seen.insert(p.l).second) {
            throw InvalidInput("velocity fit: l values must be distinct");
        }
    }
    const double n = static_cast<double>(features.size());
    double ml = 0, mf = 0;
    for (const auto &p : features) {
        ml += p.l;
        mf += p.frequency;
    }
    ml /= n;
    mf /= n;
    double sll = 0, slf = 0;
    for (const auto &p : features) {
        sll += (p.l - ml) * (p.l - ml);
        slf += (p.l - ml) * (p.frequency - mf);
    }
    if (!(sll > 0.0)) {
        throw InvalidInput("velocity fit is rank deficient");
    }
    VelocityFit fit;
    fit.slope = slf / sll;
    fit.intercept = mf - fit.slope * ml;
    fit.v_longitudinal = fit.slope * 2.0 * substrate_thickness_h;
    double ss = 0;
    for (const auto &p : features) {
        const double r = p.frequency - (fit.intercept + fit.slope * p.l);
        fit.residuals.push_back(r);
        ss += r * r;
    }
    fit.stderr_v = features.size() > 2
                       ? std::sqrt(ss / (n - 2.0) / sll) * 2.0 * substrate_thickness_h
                       : 0.0;
    return fit;
}

std::string format_features_csv(const std::vector<LabeledFeature> &features) {
    std::string out = "l,freq_hz\n";
    for (const auto &p : features) {
        out += std::to_string(p.l) + ',' + io::format_shortest(p.frequency) + '\n';
    }
    return out;
}

} // namespace pqed
