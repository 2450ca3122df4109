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

#include <optional>
#include <span>
#include <vector>

#include "pqed/amplitude.hpp"
#include "pqed/rabi_map.hpp"

namespace pqed {

struct SwapPulse {
    double delta_q_during = 0.0; ///< rad/s
    double duration = 0.0;       ///< s
    double rise_time = 0.0;      ///< s, linear ramp; 0 = instantaneous step
    double residual_population = 0.0; ///< qubit population left after the swap
};

/// Index of the first local minimum of `values`. Neighbouring samples that
/// differ by no more than `plateau_tol` count as equal and a flat bottom
/// resolves to its earliest sample. Returns nullopt for monotone data or a
/// plateau that runs into the end of the series.
std::optional<std::size_t> first_local_minimum(std::span<const double> values,
                                               double plateau_tol = 1e-6);

/// Runs the Rabi map over the grid and picks the detuning whose first local
/// minimum in time has the lowest qubit population. Throws NumericalError when
/// no trace has a local minimum.
SwapPulse calibrate_swap(const ModeBasis &basis, const QubitParams &qubit,
                         const std::vector<double> &detunings, const std::vector<double> &times,
                         const RabiMapOptions &opts = {});

/// Same selection on a precomputed map.
SwapPulse calibrate_swap(const RabiMap &map);

/// Applies a swap starting from `state`: the qubit detuning ramps linearly
/// from `idle_detuning` to pulse.delta_q_during over pulse.rise_time, then
/// holds for the rest of pulse.duration.
AmplitudeState apply_swap(const ModeBasis &basis, const QubitParams &qubit,
                          const SwapPulse &pulse, const AmplitudeState &state,
                          double idle_detuning, AmplitudeOptions opts = {});

} // namespace pqed
