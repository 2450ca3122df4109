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

#include "pqed/rabi_map.hpp"

#include <algorithm>

#include "pqed/amplitude.hpp"
#include "pqed/csv.hpp"
#include "pqed/errors.hpp"
#include "pqed/lindblad.hpp"
#include "pqed/parallel.hpp"

namespace pqed {

const char *to_string(Engine e) { return e == Engine::Amplitude ? "amplitude" : "lindblad"; }

Engine engine_from_string(const std::string &s) {
    if (s == "amplitude") {
        return Engine::Amplitude;
    }
    if (s == "lindblad") {
        return Engine::Lindblad;
    }
    throw InvalidInput("unknown engine '" + s + "' (expected amplitude or lindblad)");
}

std::vector<double> rabi_trace(const ModeBasis &basis, const QubitParams &qubit,
                               double delta_q, const std::vector<double> &times,
                               const RabiMapOptions &opts) {
    if (times.empty()) {
        throw InvalidInput("rabi map: time grid is empty");
    }
    QubitParams q = qubit;
    q.detuning_delta_q = delta_q;
    std::vector<double> out;
    out.reserve(times.size());
    if (opts.engine == Engine::Amplitude) {
        AmplitudeOptions ao;
        ao.phonon_t1s = opts.phonon_t1s;
        ao.tol = opts.tol;
        const auto states = amplitude_evolve_at(
            basis, q, AmplitudeState::excited_qubit(basis.size()), times, ao);
        for (const auto &s : states) {
            out.push_back(std::norm(s.c_q));
        }
    } else {
        LindbladConfig cfg;
        cfg.basis = basis;
        cfg.qubit = q;
        cfg.phonon_t1s = opts.phonon_t1s.empty()
                             ? std::vector<double>(basis.size(), std::numeric_limits<double>::infinity())
                             : opts.phonon_t1s;
        cfg.fock_truncation = opts.fock_truncation;
        cfg.dimension_cap = opts.dimension_cap;
        cfg.time_grid = times;
        cfg.tol = opts.tol;
        out = lindblad_evolve(cfg).qubit_population;
    }
    for (double &p : out) {
        p = std::clamp(p, 0.0, 1.0);
    }
    return out;
}

RabiMap rabi_map(const ModeBasis &basis, const QubitParams &qubit,
                 const std::vector<double> &detunings, const std::vector<double> &times,
                 const RabiMapOptions &opts) {
    if (detunings.empty() || times.empty()) {
        throw InvalidInput("rabi map: grids must be non-empty");
    }
    RabiMap map;
    map.detuning_axis = detunings;
    map.time_axis = times;
    map.population.resize(static_cast<Eigen::Index>(detunings.size()),
                          static_cast<Eigen::Index>(times.size()));
    parallel_for(detunings.size(), opts.threads, [&](std::size_t i) {
        const auto row = rabi_trace(basis, qubit, detunings[i], times, opts);
        for (std::size_t j = 0; j < row.size(); ++j) {
            map.population(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        }
    });
    return map;
}

std::string format_rabi_map_csv(const RabiMap &map) {
    io::MatrixCsv m;
    m.corner_label = "delta_q_hz/time_s";
    m.column_axis = map.time_axis;
    m.row_axis.reserve(map.detuning_axis.size());
    for (double d : map.detuning_axis) {
        m.row_axis.push_back(d / kTwoPi);
    }
    m.values = map.population;
    return io::format_matrix_csv(m, 9);
}

RabiMap parse_rabi_map_csv(std::string_view text) {
    const auto m = io::parse_matrix_csv(text);
    RabiMap map;
    map.time_axis = m.column_axis;
    for (double d : m.row_axis) {
        map.detuning_axis.push_back(d * kTwoPi);
    }
    map.population = m.values;
    return map;
}

} // namespace pqed
