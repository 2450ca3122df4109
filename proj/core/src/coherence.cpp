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

#include "pqed/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pqed/csv.hpp"
#include "pqed/errors.hpp"
#include "pqed/parallel.hpp"
#include "pqed/rabi_map.hpp"

namespace pqed {

namespace {

void check_tau(const std::vector<double> &tau) {
    if (tau.empty()) {
        throw InvalidInput("tau axis is empty");
    }
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] < 0.0 || (i > 0 && !(tau[i] > tau[i - 1]))) {
            throw InvalidInput("tau axis must be non-negative and strictly increasing");
        }
    }
}

AmplitudeOptions amplitude_options(const std::vector<double> &phonon_t1s,
                                   const ode::Tolerances &tol) {
    AmplitudeOptions ao;
    ao.phonon_t1s = phonon_t1s;
    ao.tol = tol;
    return ao;
}

// swap out of every stored state and read the qubit population
std::vector<double> retrieve(const ModeBasis &basis, const QubitParams &qubit,
                             const SwapPulse &swap, const std::vector<AmplitudeState> &stored,
                             double storage_detuning, bool qubit_decay,
                             const std::vector<double> &phonon_t1s, const ode::Tolerances &tol) {
    AmplitudeOptions ao = amplitude_options(phonon_t1s, tol);
    ao.qubit_decay = qubit_decay;
    std::vector<double> out;
    out.reserve(stored.size());
    for (const auto &s : stored) {
        out.push_back(std::norm(apply_swap(basis, qubit, swap, s, storage_detuning, ao).c_q));
    }
    return out;
}

std::vector<double> full_sequence(const ModeBasis &basis, const QubitParams &qubit,
                                  const SwapPulse &swap, const std::vector<double> &delays,
                                  double storage_detuning, bool second_decay,
                                  const std::vector<double> &phonon_t1s,
                                  const ode::Tolerances &tol) {
    AmplitudeOptions ao = amplitude_options(phonon_t1s, tol);
    AmplitudeState s0 = AmplitudeState::excited_qubit(basis.size());
    s0 = apply_swap(basis, qubit, swap, s0, storage_detuning, ao);
    s0.time = 0.0;
    QubitParams parked = qubit;
    parked.detuning_delta_q = storage_detuning;
    auto stored = amplitude_evolve_at(basis, parked, s0, delays, ao);
    for (auto &s : stored) {
        s.time = 0.0;
    }
    return retrieve(basis, qubit, swap, stored, storage_detuning, second_decay, phonon_t1s, tol);
}

} // namespace

OverlapSignal overlap_signal(const ModeBasis &basis, const Eigen::VectorXcd &mode_amplitudes,
                             const std::vector<double> &tau_axis, double frame_offset,
                             const std::vector<double> &phonon_t1s) {
    if (mode_amplitudes.size() != static_cast<Eigen::Index>(basis.size())) {
        throw InvalidInput("overlap: amplitude count does not match the basis");
    }
    if (!phonon_t1s.empty() && phonon_t1s.size() != basis.size()) {
        throw InvalidInput("overlap: phonon_t1s must have one entry per mode");
    }
    const double total = mode_amplitudes.squaredNorm();
    if (!(total > 0.0)) {
        throw InvalidInput("overlap: no excitation in the phonon modes");
    }
    OverlapSignal out;
    out.tau_axis = tau_axis;
    const auto det = basis.detunings();
    for (Eigen::Index m = 0; m < mode_amplitudes.size(); ++m) {
        out.mode_weights.push_back(std::norm(mode_amplitudes[m]) / total);
    }
    out.eta.reserve(tau_axis.size());
    for (double tau : tau_axis) {
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < det.size(); ++m) {
            const double kappa = phonon_t1s.empty() ? 0.0 : amplitude_rate(phonon_t1s[m]);
            acc += out.mode_weights[m] *
                   std::exp(std::complex<double>(-kappa * tau, (det[m] - frame_offset) * tau));
        }
        out.eta.push_back(acc);
    }
    return out;
}

const char *to_string(T1Variant v) {
    return v == T1Variant::Overlap ? "overlap" : "full-sequence";
}

T1Variant t1_variant_from_string(const std::string &s) {
    if (s == "overlap") {
        return T1Variant::Overlap;
    }
    if (s == "full-sequence") {
        return T1Variant::FullSequence;
    }
    throw InvalidInput("unknown T1 variant '" + s + "' (expected overlap or full-sequence)");
}

AmplitudeState swap_in(const ModeBasis &basis, const QubitParams &qubit, const SwapPulse &swap,
                       const CoherenceOptions &opts) {
    return apply_swap(basis, qubit, swap, AmplitudeState::excited_qubit(basis.size()),
                      opts.storage_detuning, amplitude_options(opts.phonon_t1s, opts.tol));
}

DecaySignal phonon_t1_signal(const ModeBasis &basis, const QubitParams &qubit,
                             const SwapPulse &swap, const std::vector<double> &tau_axis,
                             const CoherenceOptions &opts) {
    check_tau(tau_axis);
    DecaySignal sig;
    sig.kind = SignalKind::T1;
    sig.t_axis = tau_axis;
    if (opts.variant == T1Variant::Overlap) {
        const auto state = swap_in(basis, qubit, swap, opts);
        const auto ov = overlap_signal(basis, state.c_modes, tau_axis, 0.0, opts.phonon_t1s);
        for (const auto &e : ov.eta) {
            sig.value.push_back(std::norm(e));
        }
    } else {
        sig.value = full_sequence(basis, qubit, swap, tau_axis, opts.storage_detuning,
                                  opts.second_swap_qubit_decay, opts.phonon_t1s, opts.tol);
    }
    return sig;
}

DecaySignal phonon_t2_signal(const ModeBasis &basis, const QubitParams &qubit,
                             const SwapPulse &swap, const std::vector<double> &tau_axis,
                             double artificial_detuning, const CoherenceOptions &opts) {
    check_tau(tau_axis);
    const auto state = swap_in(basis, qubit, swap, opts);
    const auto ov =
        overlap_signal(basis, state.c_modes, tau_axis, opts.frame_offset, opts.phonon_t1s);
    DecaySignal sig;
    sig.kind = SignalKind::T2;
    sig.t_axis = tau_axis;
    for (std::size_t i = 0; i < tau_axis.size(); ++i) {
        const auto rot = std::polar(1.0, artificial_detuning * tau_axis[i]);
        sig.value.push_back(0.5 * (1.0 + (rot * ov.eta[i]).real()));
    }
    return sig;
}

std::vector<SweepPoint> t1_vs_swap_amplitude(const ModeBasis &basis, const QubitParams &qubit,
                                             const std::vector<double> &detunings,
                                             const std::vector<double> &delay_axis,
                                             const SweepOptions &opts) {
    if (detunings.empty()) {
        throw InvalidInput("t1 sweep: detuning grid is empty");
    }
    if (opts.pulse_time_grid.size() < 3) {
        throw InvalidInput("t1 sweep: pulse time grid needs at least 3 points");
    }
    check_tau(delay_axis);
    std::vector<SweepPoint> points(detunings.size());
    parallel_for(detunings.size(), opts.threads, [&](std::size_t i) {
        SweepPoint &pt = points[i];
        pt.delta_q = detunings[i];
        pt.signal.kind = SignalKind::RabiAmplitudeSweep;
        pt.signal.t_axis = delay_axis;

        RabiMapOptions ro;
        ro.phonon_t1s = opts.phonon_t1s;
        ro.tol = opts.tol;
        auto trace = rabi_trace(basis, qubit, pt.delta_q, opts.pulse_time_grid, ro);
        auto k = first_local_minimum(trace);
        if (!k) {
            QubitParams lossless = qubit;
            lossless.t1_qubit = std::numeric_limits<double>::infinity();
            trace = rabi_trace(basis, lossless, pt.delta_q, opts.pulse_time_grid, ro);
            k = first_local_minimum(trace);
            pt.lossless_fallback = true;
        }
        if (!k) {
            pt.swap_duration = std::numeric_limits<double>::quiet_NaN();
            pt.t1_eff = std::numeric_limits<double>::quiet_NaN();
            pt.fit.message = "no local minimum in the Rabi trace";
            return;
        }
        SwapPulse swap;
        swap.delta_q_during = pt.delta_q;
        swap.duration = opts.pulse_time_grid[*k] - opts.pulse_time_grid.front();
        pt.swap_duration = swap.duration;
        pt.signal.value = full_sequence(basis, qubit, swap, delay_axis, opts.storage_detuning,
                                        opts.second_swap_qubit_decay, opts.phonon_t1s, opts.tol);
        pt.fit = fit_decay(pt.signal, FitModel::Exp);
        pt.t1_eff = pt.fit.get("T1");
        pt.converged = pt.fit.converged;
    });
    return points;
}

std::string format_sweep_csv(const std::vector<SweepPoint> &points) {
    std::string out = "delta_q_hz,t1_eff_s,converged\n";
    for (const auto &p : points) {
        out += io::format_shortest(p.delta_q / kTwoPi) + ',' +
               (std::isfinite(p.t1_eff) ? io::format_shortest(p.t1_eff) : std::string("nan")) +
               ',' + (p.converged ? "1" : "0") + '\n';
    }
    return out;
}

} // namespace pqed
