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

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pqed/hamiltonian.hpp"
#include "pqed/modes.hpp"
#include "pqed/ode.hpp"

namespace pqed {

/// Amplitudes of the single-excitation manifold at one instant.
struct AmplitudeState {
    std::complex<double> c_q{1.0, 0.0};
    Eigen::VectorXcd c_modes;
    double time = 0.0;

    /// |c_q|^2 + sum |c_m|^2
    double norm2() const;

    /// Qubit excited, all modes empty.
    static AmplitudeState excited_qubit(std::size_t modes);
};

/// Time-dependent qubit detuning (rad/s) during an evolution.
using DetuningSchedule = std::function<double(double t)>;

/// Linear ramp from `from` to `to` over `rise` seconds, then constant.
/// A zero rise time gives a step.
DetuningSchedule linear_ramp(double from, double to, double rise, double t_start = 0.0);

struct AmplitudeOptions {
    /// Per-mode phonon lifetimes; empty means lossless modes.
    std::vector<double> phonon_t1s;
    bool qubit_decay = true;
    /// Overrides qubit.detuning_delta_q when set.
    DetuningSchedule schedule;
    ode::Tolerances tol{};
};

/// Integrates
///   dc_q/dt = (-gamma_q + i delta_q) c_q + i sum_m g_m c_m
///   dc_m/dt = i g_m c_q + (i delta_m - kappa_m) c_m
/// with the adaptive Dormand-Prince scheme. Samples are returned on a
/// uniform grid from initial.time to initial.time + duration with spacing
/// at most dt_max (the step size itself is chosen by the error control).
std::vector<AmplitudeState> amplitude_evolve(const ModeBasis &basis, const QubitParams &qubit,
                                             const AmplitudeState &initial, double duration,
                                             double dt_max, const AmplitudeOptions &opts = {});

/// As amplitude_evolve, sampled at the given absolute times (sorted, >= initial.time).
std::vector<AmplitudeState> amplitude_evolve_at(const ModeBasis &basis, const QubitParams &qubit,
                                                const AmplitudeState &initial,
                                                std::span<const double> times,
                                                const AmplitudeOptions &opts = {});

/// Final state only.
AmplitudeState amplitude_propagate(const ModeBasis &basis, const QubitParams &qubit,
                                   const AmplitudeState &initial, double duration,
                                   const AmplitudeOptions &opts = {});

} // namespace pqed
