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

#include "pqed/amplitude.hpp"

#include <cmath>

#include "pqed/errors.hpp"

namespace pqed {

double AmplitudeState::norm2() const { return std::norm(c_q) + c_modes.squaredNorm(); }

AmplitudeState AmplitudeState::excited_qubit(std::size_t modes) {
    AmplitudeState s;
    s.c_q = 1.0;
    s.c_modes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes));
    return s;
}

DetuningSchedule linear_ramp(double from, double to, double rise, double t_start) {
    if (rise < 0.0) {
        throw InvalidInput("rise time must be >= 0");
    }
    return [=](double t) {
        const double s = t - t_start;
        if (rise == 0.0 || s >= rise) {
            return to;
        }
        if (s <= 0.0) {
            return from;
        }
        return from + (to - from) * (s / rise);
    };
}

std::vector<AmplitudeState> amplitude_evolve_at(const ModeBasis &basis, const QubitParams &qubit,
                                                const AmplitudeState &initial,
                                                std::span<const double> times,
                                                const AmplitudeOptions &opts) {
    if (basis.modes.empty()) {
        throw InvalidInput("mode basis is empty");
    }
    qubit.validate();
    const auto n = static_cast<Eigen::Index>(basis.size());
    if (initial.c_modes.size() != n) {
        throw InvalidInput("initial state has the wrong number of mode amplitudes");
    }
    if (!opts.phonon_t1s.empty() && opts.phonon_t1s.size() != basis.size()) {
        throw InvalidInput("phonon_t1s must have one entry per mode");
    }

    using Complex = std::complex<double>;
    const Complex I(0.0, 1.0);
    Eigen::VectorXd g(n);
    Eigen::VectorXcd diag(n);
    const auto det = basis.detunings();
    for (Eigen::Index m = 0; m < n; ++m) {
        const auto um = static_cast<std::size_t>(m);
        g[m] = basis.modes[um].g;
        const double kappa = opts.phonon_t1s.empty() ? 0.0 : amplitude_rate(opts.phonon_t1s[um]);
        diag[m] = Complex(-kappa, det[um]);
    }
    const double gamma = opts.qubit_decay ? qubit.gamma() : 0.0;
    const double dq = qubit.detuning_delta_q;
    const DetuningSchedule &schedule = opts.schedule;

    // y[0] = c_q, y[1 + m] = c_m
    auto rhs = [&](double t, const Eigen::VectorXcd &y, Eigen::VectorXcd &dy) {
        const double delta = schedule ? schedule(t) : dq;
        const Complex cq = y[0];
        const auto cm = y.tail(n);
        dy[0] = Complex(-gamma, delta) * cq + I * g.dot(cm);
        dy.tail(n) = (I * cq) * g.cast<Complex>() + diag.cwiseProduct(cm);
    };

    Eigen::VectorXcd y0(n + 1);
    y0[0] = initial.c_q;
    y0.tail(n) = initial.c_modes;

    std::vector<AmplitudeState> out;
    out.reserve(times.size());
    ode::Options o;
    o.tol = opts.tol;
    ode::DormandPrince<Eigen::VectorXcd> solver(o);
    solver.integrate(rhs, initial.time, y0, times, [&](double t, const Eigen::VectorXcd &y) {
        AmplitudeState s;
        s.time = t;
        s.c_q = y[0];
        s.c_modes = y.tail(n);
        out.push_back(std::move(s));
    });
    return out;
}

std::vector<AmplitudeState> amplitude_evolve(const ModeBasis &basis, const QubitParams &qubit,
                                             const AmplitudeState &initial, double duration,
                                             double dt_max, const AmplitudeOptions &opts) {
    if (!(duration > 0.0)) {
        throw InvalidInput("duration must be positive");
    }
    if (!(dt_max > 0.0)) {
        throw InvalidInput("dt_max must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt_max - 1e-9));
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        times[k] = initial.time + duration * static_cast<double>(k) / static_cast<double>(steps);
    }
    return amplitude_evolve_at(basis, qubit, initial, times, opts);
}

AmplitudeState amplitude_propagate(const ModeBasis &basis, const QubitParams &qubit,
                                   const AmplitudeState &initial, double duration,
                                   const AmplitudeOptions &opts) {
    if (duration < 0.0) {
        throw InvalidInput("duration must be >= 0");
    }
    const double t[] = {initial.time + duration};
    return amplitude_evolve_at(basis, qubit, initial, t, opts).front();
}

} // namespace pqed
