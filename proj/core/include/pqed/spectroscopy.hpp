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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pqed {

/// Rows follow the frequency axis, columns the x axis (coil current or
/// detuning, in whatever unit the input uses).
struct SpectroscopyMap {
    std::vector<double> x_axis;
    std::vector<double> freq_axis; ///< Hz
    Eigen::MatrixXd amplitude;     ///< freq x x

    void validate() const;
};

/// Matrix CSV: first row x axis, first column frequency (Hz).
SpectroscopyMap parse_spectroscopy_csv(std::string_view text);
std::string format_spectroscopy_csv(const SpectroscopyMap &map);

struct MaxValuePlot {
    std::vector<double> freq_axis;
    std::vector<double> max_amplitude;
};

MaxValuePlot max_value_plot(const SpectroscopyMap &map);

/// Contiguous frequency slice [first, first + count) of a plot.
MaxValuePlot slice(const MaxValuePlot &plot, std::size_t first, std::size_t count);

struct MainFeature {
    double frequency = 0.0; ///< Hz, parabola-refined
    std::size_t index = 0;  ///< sample of the global minimum
    bool low_confidence = false; ///< minimum sits on an endpoint
};

/// Deepest dip of the plot with three-point parabolic refinement.
/// Needs >= 16 points; a flat plot (range < 1e-12) has no feature.
MainFeature extract_main_feature(const MaxValuePlot &plot);

struct LabeledFeature {
    int l = 0;
    double frequency = 0.0; ///< Hz
};

struct VelocityFit {
    double v_longitudinal = 0.0; ///< m/s, slope * 2h
    double slope = 0.0;          ///< Hz per overtone
    double intercept = 0.0;      ///< Hz
    double stderr_v = 0.0;       ///< standard error of v_longitudinal
    std::vector<double> residuals;
};

/// Ordinary least squares of frequency against l.
VelocityFit fit_longitudinal_velocity(const std::vector<LabeledFeature> &features,
                                      double substrate_thickness_h);

/// `l,freq_hz`
std::string format_features_csv(const std::vector<LabeledFeature> &features);

} // namespace pqed
