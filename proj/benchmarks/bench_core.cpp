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

#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "pqed/amplitude.hpp"
#include "pqed/fit.hpp"
#include "pqed/lindblad.hpp"
#include "pqed/modes.hpp"
#include "pqed/propagator.hpp"
#include "pqed/rabi_map.hpp"

using namespace pqed;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    }
    return v;
}

ModeBasis basis(Picture p, int count) {
    MaterialConstants mat;
    mat.coupling_scale = 0.85;
    return build_basis(503, p, count, ResonatorGeometry{}, mat);
}

void BM_AmplitudeEvolve(benchmark::State &state) {
    const int count = static_cast<int>(state.range(0));
    const auto b = basis(count <= 4 ? Picture::Discrete : Picture::SemiContinuum, count);
    const QubitParams q{6e-6, 2 * M_PI * 75e3};
    const auto t = linspace(0, 10e-6, 201);
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplitude_evolve_at(b, q, AmplitudeState::excited_qubit(b.size()), t));
    }
}
BENCHMARK(BM_AmplitudeEvolve)->Arg(4)->Arg(81)->Unit(benchmark::kMillisecond);

void BM_Lindblad(benchmark::State &state) {
    LindbladConfig cfg;
    cfg.basis = basis(Picture::Discrete, static_cast<int>(state.range(0)));
    cfg.qubit.t1_qubit = 6e-6;
    cfg.phonon_t1s.assign(cfg.basis.size(), 20e-6);
    cfg.time_grid = linspace(0, 5e-6, 51);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lindblad_evolve(cfg));
    }
}
BENCHMARK(BM_Lindblad)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RabiMap(benchmark::State &state) {
    const auto b = basis(Picture::Discrete, 4);
    auto det = linspace(-2 * M_PI * 1e6, 2 * M_PI * 1e6, 21);
    const auto t = linspace(0, 4e-6, 201);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rabi_map(b, QubitParams{6e-6, 0.0}, det, t));
    }
}
BENCHMARK(BM_RabiMap)->Unit(benchmark::kMillisecond);

void BM_Roundtrip(benchmark::State &state) {
    BeamGrid g;
    g.nx = g.ny = static_cast<std::size_t>(state.range(0));
    PropagatorConfig cfg;
    RoundtripPropagator prop(cfg, g, 2 * M_PI * 6.65e9);
    FieldMatrix f = initial_field(cfg, g, 2 * M_PI * 6.65e9).values;
    for (auto _ : state) {
        prop.apply(f);
        benchmark::DoNotOptimize(f.data());
    }
}
BENCHMARK(BM_Roundtrip)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_FitRamsey(benchmark::State &state) {
    DecaySignal sig;
    sig.kind = SignalKind::T2;
    sig.t_axis = linspace(0, 40e-6, 401);
    for (double t : sig.t_axis) {
        sig.value.push_back(0.5 + 0.45 * std::exp(-t / 27e-6) * std::cos(2 * M_PI * 200e3 * t + 0.3));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_decay(sig, FitModel::DecayingSine));
    }
}
BENCHMARK(BM_FitRamsey)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
