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

#include "pqed/swap.hpp"

#include <cmath>

#include "pqed/errors.hpp"

namespace pqed {

std::optional<std::size_t> first_local_minimum(std::span<const double> values,
                                               double plateau_tol) {
    const std::size_t n = values.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(values[i] < values[i - 1])) {
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && std::abs(values[j] - values[i]) <= plateau_tol) {
            ++j;
        }
        if (j == n) {
            return std::nullopt;
        }
        if (values[j] > values[i]) {
            return i;
        }
    }
    return std::nullopt;
}

SwapPulse calibrate_swap(const RabiMap &map) {
    std::optional<SwapPulse> best;
    const auto nt = static_cast<std::size_t>(map.population.cols());
    std::vector<double> row(nt);
    for (Eigen::Index i = 0; i < map.population.rows(); ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            row[j] = map.population(i, static_cast<Eigen::Index>(j));
        }
        const auto k = first_local_minimum(row);
        if (!k) {
            continue;
        }
        if (!best || row[*k] < best->residual_population) {
            SwapPulse p;
            p.delta_q_during = map.detuning_axis[static_cast<std::size_t>(i)];
            p.duration = map.time_axis[*k] - map.time_axis.front();
            p.residual_population = row[*k];
            best = p;
        }
    }
    if (!best) {
        throw NumericalError(
            "swap calibration: no local minimum of the qubit population in the time window");
    }
    return *best;
}

SwapPulse calibrate_swap(const ModeBasis &basis, const QubitParams &qubit,
                         const std::vector<double> &detunings, const std::vector<double> &times,
                         const RabiMapOptions &opts) {
    return calibrate_swap(rabi_map(basis, qubit, detunings, times, opts));
}

AmplitudeState apply_swap(const ModeBasis &basis, const QubitParams &qubit,
                          const SwapPulse &pulse, const AmplitudeState &state,
                          double idle_detuning, AmplitudeOptions opts) {
    if (!(pulse.duration > 0.0)) {
        throw InvalidInput("swap duration must be positive");
    }
    opts.schedule = linear_ramp(idle_detuning, pulse.delta_q_during, pulse.rise_time, state.time);
    return amplitude_propagate(basis, qubit, state, pulse.duration, opts);
}

} // namespace pqed
