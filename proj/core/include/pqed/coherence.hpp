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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pqed/amplitude.hpp"
#include "pqed/fit.hpp"
#include "pqed/swap.hpp"

namespace pqed {

/// Default qubit detuning while the excitation is stored in the phonon.
inline constexpr double kDefaultStorageDetuning = -kTwoPi * 3e6;

struct OverlapSignal {
    std::vector<double> tau_axis;
    std::vector<std::complex<double>> eta;
    std::vector<double> mode_weights; ///< |c_m|^2 normalized to unit sum
};

/// eta(tau) = sum_m w_m exp((i (delta_m - frame_offset) - kappa_m) tau) with
/// w_m = |c_m|^2 / sum |c_m|^2. kappa_m comes from phonon_t1s (empty = 0).
OverlapSignal overlap_signal(const ModeBasis &basis, const Eigen::VectorXcd &mode_amplitudes,
                             const std::vector<double> &tau_axis, double frame_offset = 0.0,
                             const std::vector<double> &phonon_t1s = {});

enum class T1Variant {
    Overlap,      ///< |eta(tau)|^2
    FullSequence, ///< swap in, wait at the storage detuning, swap out, read P_e
};

const char *to_string(T1Variant v);
T1Variant t1_variant_from_string(const std::string &s);

struct CoherenceOptions {
    T1Variant variant = T1Variant::Overlap;
    double storage_detuning = kDefaultStorageDetuning;
    bool second_swap_qubit_decay = false;
    /// Rotating-frame offset from omega_{l,0} used for eta in the T2 signal.
    double frame_offset = 0.0;
    std::vector<double> phonon_t1s;
    ode::Tolerances tol{};
    int threads = 1;
};

/// State after swapping an excited qubit into the phonon modes.
AmplitudeState swap_in(const ModeBasis &basis, const QubitParams &qubit, const SwapPulse &swap,
                       const CoherenceOptions &opts = {});

DecaySignal phonon_t1_signal(const ModeBasis &basis, const QubitParams &qubit,
                             const SwapPulse &swap, const std::vector<double> &tau_axis,
                             const CoherenceOptions &opts = {});

/// (1 + Re[exp(i Omega tau) eta(tau)]) / 2
DecaySignal phonon_t2_signal(const ModeBasis &basis, const QubitParams &qubit,
                             const SwapPulse &swap, const std::vector<double> &tau_axis,
                             double artificial_detuning, const CoherenceOptions &opts = {});

struct SweepOptions {
    /// Time grid on which the swap length is read off the Rabi trace.
    std::vector<double> pulse_time_grid;
    double storage_detuning = kDefaultStorageDetuning;
    bool second_swap_qubit_decay = false;
    std::vector<double> phonon_t1s;
    ode::Tolerances tol{};
    int threads = 1;
};

struct SweepPoint {
    double delta_q = 0.0;       ///< rad/s
    double swap_duration = 0.0; ///< s; NaN when no local minimum was found
    bool lossless_fallback = false; ///< swap length taken from the decay-free trace
    DecaySignal signal;
    FitResult fit;
    double t1_eff = 0.0;
    bool converged = false;
};

/// For every detuning: swap length from the first local minimum of the Rabi
/// trace, then swap - delay - swap, then an exponential fit of the retrieved
/// qubit population versus delay.
std::vector<SweepPoint> t1_vs_swap_amplitude(const ModeBasis &basis, const QubitParams &qubit,
                                             const std::vector<double> &detunings,
                                             const std::vector<double> &delay_axis,
                                             const SweepOptions &opts);

/// `delta_q_hz,t1_eff_s,converged`
std::string format_sweep_csv(const std::vector<SweepPoint> &points);

} // namespace pqed
