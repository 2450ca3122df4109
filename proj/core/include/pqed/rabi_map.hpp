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

#include "pqed/hamiltonian.hpp"
#include "pqed/modes.hpp"
#include "pqed/ode.hpp"

namespace pqed {

enum class Engine { Amplitude, Lindblad };

const char *to_string(Engine e);
Engine engine_from_string(const std::string &s);

struct RabiMap {
    std::vector<double> detuning_axis; ///< rad/s
    std::vector<double> time_axis;     ///< s
    Eigen::MatrixXd population;        ///< rows = detuning, cols = time
};

struct RabiMapOptions {
    Engine engine = Engine::Amplitude;
    /// Per-mode phonon lifetimes; empty means lossless.
    std::vector<double> phonon_t1s;
    int fock_truncation = 2;
    std::size_t dimension_cap = kDefaultDimensionCap;
    int threads = 1;
    ode::Tolerances tol{};
};

/// Qubit excited-state population for every (detuning, time) pair, starting
/// from the excited qubit with all modes empty. Detuning rows run in parallel.
RabiMap rabi_map(const ModeBasis &basis, const QubitParams &qubit,
                 const std::vector<double> &detunings, const std::vector<double> &times,
                 const RabiMapOptions &opts = {});

/// Single trace of the same quantity (one detuning).
std::vector<double> rabi_trace(const ModeBasis &basis, const QubitParams &qubit,
                               double delta_q, const std::vector<double> &times,
                               const RabiMapOptions &opts = {});

/// First row: corner label then the time axis (s); first column: detuning
/// (Hz); body: population. 9 significant digits.
std::string format_rabi_map_csv(const RabiMap &map);
RabiMap parse_rabi_map_csv(std::string_view text);

} // namespace pqed
