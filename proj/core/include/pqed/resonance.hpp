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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pqed/propagator.hpp"

namespace pqed {

struct Peak {
    double frequency = 0.0;  ///< Hz
    double prominence = 0.0; ///< same units as the intensity
};

struct ResonanceSpectrum {
    std::vector<double> freq_axis; ///< Hz
    std::vector<double> intensity; ///< sum |S|^2 dx^2
    std::vector<Peak> peaks;       ///< sorted by frequency
};

struct SweepConfig {
    int threads = 1;
    /// Minimum peak prominence as a fraction of the window maximum.
    double min_prominence = 0.003;
    /// Reject axes shorter than one FSR or coarser than FSR/200.
    bool enforce_coverage = true;
};

/// Integrated intensity of the weighted complex roundtrip sum at one frequency.
double resonance_intensity(const PropagatorConfig &cfg, const BeamGrid &grid, double freq_hz);

/// Intensity at every frequency (strictly increasing, Hz), then peaks.
/// Frequencies are independent jobs; results are gathered in axis order.
ResonanceSpectrum frequency_sweep(const PropagatorConfig &cfg, const BeamGrid &grid,
                                  const std::vector<double> &freq_axis,
                                  const SweepConfig &sweep = {});

/// Local maxima whose topographic prominence is at least
/// min_relative_prominence times the largest value.
std::vector<Peak> find_peaks(const std::vector<double> &freq_axis,
                             const std::vector<double> &intensity,
                             double min_relative_prominence);

struct ConvergeOptions {
    int max_iterations = 50;
    double tolerance = 1e-6; ///< relative L2 change between iterates
};

struct ConvergedMode {
    AcousticField field; ///< unit norm (sum |psi|^2 dx^2 = 1)
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

/// Repeats: propagate, form the weighted complex sum, normalize, align its
/// global phase with the previous iterate. Stops when the relative change
/// falls below the tolerance; throws NumericalError with the last residual
/// otherwise.
ConvergedMode converge_mode(const PropagatorConfig &cfg, const BeamGrid &grid, double freq_hz,
                            const ConvergeOptions &opts = {},
                            const std::optional<AcousticField> &initial = std::nullopt);

/// Fraction of sum |psi|^2 inside the given radius from the grid centre.
double energy_fraction_within(const AcousticField &field, double radius);

/// `freq_hz,intensity`
std::string format_spectrum_csv(const ResonanceSpectrum &s);
/// `freq_hz,prominence`
std::string format_peaks_csv(const ResonanceSpectrum &s);

/// Binary mode file: 32-byte header (8-byte magic "PQEDMOD1", uint32 nx,
/// uint32 ny, float64 dx, 8 zero bytes) then nx*ny row-major float32
/// (re, im) pairs, all little-endian.
std::string encode_mode_binary(const AcousticField &field);
AcousticField decode_mode_binary(const std::string &bytes);
void write_mode_binary(const std::filesystem::path &path, const AcousticField &field);
AcousticField read_mode_binary(const std::filesystem::path &path);

} // namespace pqed
