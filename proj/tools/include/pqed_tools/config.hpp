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

// Run configuration: INI sections of `key = value` with unit suffixes.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pqed/coherence.hpp"
#include "pqed/errors.hpp"
#include "pqed/modes.hpp"
#include "pqed/propagator.hpp"
#include "pqed/rabi_map.hpp"

namespace pqed::tools {

struct QubitSection {
    double t1_qubit = 6e-6;
    double delta_q_hz = 0.0;
};

struct BasisSection {
    int l = 503;
    Picture picture = Picture::Discrete;
    int count = 4;
};

struct DynamicsSection {
    Engine engine = Engine::Amplitude;
    int fock_truncation = 2;
    int dimension_cap = 1024;
    double phonon_t1 = 20e-6; ///< every mode; inf = lossless
    double time_stop = 4e-6;
    int time_points = 801;
    double detuning_start_hz = -1e6;
    double detuning_stop_hz = 2.5e6;
    int detuning_points = 141;
    double rtol = 1e-10;
    double atol = 1e-12;
};

struct ProtocolsSection {
    double swap_delta_q_hz = 0.0;
    double swap_duration = 0.0; ///< 0 = calibrate on the dynamics grid
    double rise_time = 0.0;
    double storage_detuning_hz = -3e6;
    double frame_offset_hz = 0.0;
    T1Variant t1_variant = T1Variant::Overlap;
    bool second_swap_qubit_decay = false;
    double tau_stop = 20e-6;
    int tau_points = 401;
    double artificial_detuning_hz = 200e3;
    FitModel t1_model = FitModel::Exp;
    FitModel t2_model = FitModel::DecayingSine;
    double sweep_detuning_start_hz = -6e6;
    double sweep_detuning_stop_hz = 6e6;
    int sweep_detuning_points = 25;
    double sweep_delay_stop = 40e-6;
    int sweep_delay_points = 201;
    double pulse_time_stop = 3e-6;
    int pulse_time_points = 601;
};

struct BeampropSection {
    int grid_n = 1024;
    double extent = 1.2e-3;
    double v_longitudinal = 11110.0;
    double v_transverse = 6056.0;
    double v_aln = 11008.0;
    double absorber_width = 180e-6;
    double absorber_strength = 5.0;
    int roundtrips = 400;
    bool aln = true;
    bool absorber = true;
    Dispersion dispersion = Dispersion::EffectiveVelocity;
    SumWindow window = SumWindow::Hann;
    FftPlanner planner = FftPlanner::Estimate;
    int l = 503;
    double span_fsr = 1.0;
    int points_per_fsr = 400;
    double min_prominence = 0.003;
    double mode_frequency_hz = 0.0; ///< 0 = strongest peak of a sweep
    int max_iterations = 50;
    double tolerance = 1e-6;
};

struct IoSection {
    std::string output_dir = "out";
};

struct AnalysisSection {
    std::string input;
    double window_hz = 0.0; ///< 0 = one FSR from geometry and materials
    int first_l = 0;        ///< 0 = infer l from frequency / FSR
};

struct RunConfig {
    ResonatorGeometry geometry{};
    MaterialConstants materials{};
    QubitSection qubit{};
    BasisSection basis{};
    DynamicsSection dynamics{};
    ProtocolsSection protocols{};
    BeampropSection beamprop{};
    IoSection io{};
    AnalysisSection analysis{};

    void validate() const;

    // Derived inputs for the core library.
    QubitParams qubit_params() const;
    ModeBasis mode_basis() const;
    std::vector<double> phonon_t1s() const;
    ode::Tolerances tolerances() const;
    PropagatorConfig propagator() const;
    BeamGrid beam_grid() const;
};

/// Error in configuration text or values; maps to exit code 2.
struct ConfigError : InvalidInput {
    using InvalidInput::InvalidInput;
};

/// Applies INI text on top of `cfg`. Unknown sections or keys, malformed
/// numbers and wrong units raise ConfigError naming the line.
void apply_ini(RunConfig &cfg, std::string_view text, std::string_view source = "<config>");

/// Applies one `section.key=value` override.
void apply_override(RunConfig &cfg, std::string_view assignment);

/// Sets one key from its textual value.
void set_value(RunConfig &cfg, std::string_view section, std::string_view key,
               std::string_view value);

/// Every key with its canonical value, by section, in declaration order.
std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
resolved(const RunConfig &cfg);

/// Canonical INI text of the resolved configuration.
std::string to_ini(const RunConfig &cfg);

std::vector<std::string> preset_names();
RunConfig preset(std::string_view name);

/// Parses "<number>[ ]<unit>" for a key of the given dimension
/// ("length", "time", "frequency", "velocity", "pressure", "piezo", "field",
/// or "" for dimensionless). Exposed for tests.
double parse_quantity(std::string_view text, std::string_view dimension);

} // namespace pqed::tools
