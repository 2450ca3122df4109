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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pqed/coherence.hpp"
#include "pqed/errors.hpp"
#include "pqed/fit.hpp"
#include "pqed/swap.hpp"

using namespace pqed;

namespace {

ModeBasis single_mode(double g) {
    ModeBasis b;
    PhononMode m;
    m.l = 1;
    m.omega = kTwoPi * 6.6e9;
    m.g = g;
    m.basis_radius = 1e-4;
    b.modes.push_back(m);
    return b;
}

ModeBasis reference_basis(Picture p = Picture::Discrete, int count = 4) {
    MaterialConstants mat;
    mat.coupling_scale = 0.85;
    return build_basis(503, p, count, ResonatorGeometry{}, mat);
}

std::vector<double> grid(double start, double stop, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
    }
    return t;
}

std::vector<double> hz_grid(double start, double stop, int n) {
    auto v = grid(start, stop, n);
    for (double &x : v) {
        x *= kTwoPi;
    }
    return v;
}

QubitParams reference_qubit() {
    QubitParams q;
    q.t1_qubit = 6e-6;
    return q;
}

/// Frequency (Hz) of the largest periodogram peak in [lo, hi].
double dominant_frequency(const std::vector<double> &t, const std::vector<double> &v, double lo,
                          double hi) {
    double mean = 0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double best = lo, best_p = -1;
    for (double f = lo; f <= hi; f += (hi - lo) / 4000) {
        std::complex<double> z = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            z += (v[k] - mean) * std::polar(1.0, -kTwoPi * f * t[k]);
        }
        if (std::norm(z) > best_p) {
            best_p = std::norm(z);
            best = f;
        }
    }
    return best;
}

} // namespace

TEST_SUITE("protocols") {

TEST_CASE("first local minimum") {
    using V = std::vector<double>;
    CHECK(!first_local_minimum(V{3, 2, 1, 0}));
    CHECK(!first_local_minimum(V{0, 1, 2}));
    CHECK(!first_local_minimum(V{}));
    CHECK(first_local_minimum(V{3, 2, 1, 2, 0}) == 2u);
    CHECK(first_local_minimum(V{3, 1, 1, 1, 2}) == 1u);
    CHECK(first_local_minimum(V{3, 1, 1 + 5e-7, 1, 2}) == 1u);
    CHECK(!first_local_minimum(V{3, 1, 1, 1}));
    CHECK(first_local_minimum(V{3, 2, 2, 1, 4}) == 3u);
    CHECK(first_local_minimum(V{5, 5, 4, 6, 1, 7}) == 2u);
}

TEST_CASE("single-mode swap time is pi / 2g") {
    const double g = kTwoPi * 260e3;
    const auto t = grid(0, 3e-6, 601);
    const auto pulse = calibrate_swap(single_mode(g), QubitParams{}, hz_grid(-0.5e6, 0.5e6, 21), t);
    CHECK(pulse.delta_q_during == doctest::Approx(0.0).epsilon(1e-12).scale(1));
    CHECK(std::abs(pulse.duration - kPi / (2 * g)) <= t[1]);
    CHECK(pulse.residual_population < 1e-4);
}

TEST_CASE("four-mode swap calibration") {
    const auto pulse = calibrate_swap(reference_basis(), reference_qubit(), hz_grid(-1e6, 2.5e6, 141),
                                      grid(0, 4e-6, 801));
    CHECK(pulse.duration >= 0.4e-6);
    CHECK(pulse.duration <= 1.2e-6);
    CHECK(pulse.residual_population < 0.1);
}

TEST_CASE("semi-continuum swap transfers most of the excitation") {
    const auto basis = reference_basis(Picture::SemiContinuum, 81);
    const auto pulse = calibrate_swap(basis, reference_qubit(), hz_grid(-0.5e6, 0.5e6, 41), grid(0, 3e-6, 301));
    CHECK(pulse.residual_population <= 0.15);
    const auto state = swap_in(basis, reference_qubit(), pulse);
    CHECK(state.c_modes.squaredNorm() >= 0.85);
}

TEST_CASE("calibration fails without a minimum in the window") {
    const double g = kTwoPi * 260e3;
    CHECK_THROWS_AS(calibrate_swap(single_mode(g), QubitParams{}, hz_grid(-0.1e6, 0.1e6, 3),
                                   grid(0, 0.3e-6, 31)),
                    NumericalError);
}

TEST_CASE("swap with a step equals fixed-detuning evolution") {
    const auto b = reference_basis();
    auto q = reference_qubit();
    SwapPulse p;
    p.delta_q_during = kTwoPi * 75e3;
    p.duration = 0.8e-6;
    const auto a = apply_swap(b, q, p, AmplitudeState::excited_qubit(4), -kTwoPi * 3e6);
    q.detuning_delta_q = p.delta_q_during;
    const auto ref = amplitude_propagate(b, q, AmplitudeState::excited_qubit(4), 0.8e-6);
    CHECK(std::abs(a.c_q - ref.c_q) < 1e-9);
    CHECK((a.c_modes - ref.c_modes).cwiseAbs().maxCoeff() < 1e-9);

    // a ramp starting far below the modes delays the transfer
    p.rise_time = 50e-9;
    const auto ramped = apply_swap(b, reference_qubit(), p, AmplitudeState::excited_qubit(4), -kTwoPi * 3e6);
    CHECK(std::norm(ramped.c_q) > std::norm(a.c_q));
}

TEST_CASE("overlap of a single stationary mode") {
    const auto b = single_mode(kTwoPi * 100e3);
    Eigen::VectorXcd c(1);
    c[0] = {0.3, -0.4};
    const auto tau = grid(0, 20e-6, 101);
    const auto ov = overlap_signal(b, c, tau);
    for (const auto &e : ov.eta) {
        CHECK(std::abs(std::norm(e) - 1.0) < 1e-14);
    }
}

TEST_CASE("two-mode beat") {
    auto b = single_mode(0.0);
    b.modes.push_back(b.modes[0]);
    b.modes[1].omega += kTwoPi * 340e3;
    const double dw = b.detunings()[1];
    Eigen::VectorXcd c(2);
    c << std::sqrt(0.5), std::complex<double>(0, std::sqrt(0.5));
    const auto tau = grid(0, 20e-6, 201);
    const auto ov = overlap_signal(b, c, tau);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        CHECK(std::abs(std::norm(ov.eta[k]) - std::pow(std::cos(dw * tau[k] / 2), 2)) < 1e-12);
    }
}

TEST_CASE("overlap properties") {
    const auto b = reference_basis(Picture::SemiContinuum, 81);
    SwapPulse p;
    p.delta_q_during = kTwoPi * 75e3;
    p.duration = 0.77e-6;
    const auto state = swap_in(b, reference_qubit(), p);
    const auto tau = grid(0, 30e-6, 301);
    const auto ov = overlap_signal(b, state.c_modes, tau);
    CHECK(std::abs(ov.eta[0] - 1.0) < 1e-12);
    double wsum = 0;
    for (double w : ov.mode_weights) {
        CHECK(w >= 0);
        wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0));
    for (const auto &e : ov.eta) {
        CHECK(std::abs(e) <= 1.0 + 1e-12);
    }

    // global phase invariance
    const auto rotated = overlap_signal(b, state.c_modes * std::polar(1.0, 1.234), tau);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        CHECK(std::abs(std::norm(rotated.eta[k]) - std::norm(ov.eta[k])) < 1e-14);
    }

    // doubling every detuning halves the time scale
    auto fast = b;
    for (auto &m : fast.modes) {
        m.omega = b.modes[0].omega + 2 * (m.omega - b.modes[0].omega);
    }
    std::vector<double> half;
    for (double t : tau) {
        half.push_back(t / 2);
    }
    const auto ov2 = overlap_signal(fast, state.c_modes, half);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        CHECK(std::abs(std::norm(ov2.eta[k]) - std::norm(ov.eta[k])) < 1e-12);
    }

    // phonon damping shrinks |eta|
    const auto damped = overlap_signal(b, state.c_modes, tau, 0.0, std::vector<double>(81, 20e-6));
    CHECK(std::abs(damped.eta.back()) < std::abs(ov.eta.back()));
}

TEST_CASE("Ramsey signal of a single lossless mode") {
    const auto b = single_mode(kTwoPi * 260e3);
    SwapPulse p;
    p.duration = kPi / (2 * b.modes[0].g);
    const auto tau = grid(0, 20e-6, 401);
    const double omega = kTwoPi * 200e3;
    const auto sig = phonon_t2_signal(b, QubitParams{}, p, tau, omega);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        CHECK(std::abs(sig.value[k] - 0.5 * (1 + std::cos(omega * tau[k]))) < 1e-12);
    }
}

TEST_CASE("Ramsey signal stays inside the overlap envelope") {
    const auto b = reference_basis(Picture::SemiContinuum, 81);
    SwapPulse p;
    p.delta_q_during = kTwoPi * 75e3;
    p.duration = 0.77e-6;
    const auto tau = grid(0, 25e-6, 501);
    const auto sig = phonon_t2_signal(b, reference_qubit(), p, tau, kTwoPi * 200e3);
    const auto ov = overlap_signal(b, swap_in(b, reference_qubit(), p).c_modes, tau);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        const double e = std::abs(ov.eta[k]);
        CHECK(sig.value[k] >= 0.5 * (1 - e) - 1e-12);
        CHECK(sig.value[k] <= 0.5 * (1 + e) + 1e-12);
    }
}

TEST_CASE("fit recovers a synthetic exponential with perturbation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    DecaySignal s;
    for (int i = 0; i < 401; ++i) {
        const double t = 80e-6 * i / 400;
        s.t_axis.push_back(t);
        s.value.push_back(std::exp(-t / 17e-6) + noise(rng));
    }
    const auto fit = fit_decay(s, FitModel::Exp);
    CHECK(fit.converged);
    CHECK(std::abs(fit.get("T1") - 17e-6) < 0.5e-6);
    CHECK(fit.error("T1") > 0);
}

TEST_CASE("fit recovers a synthetic Ramsey signal") {
    DecaySignal s;
    s.kind = SignalKind::T2;
    for (int i = 0; i < 801; ++i) {
        const double t = 80e-6 * i / 800;
        s.t_axis.push_back(t);
        s.value.push_back(0.5 * (1 + std::exp(-t / 27e-6) * std::cos(kTwoPi * 200e3 * t)));
    }
    const auto fit = fit_decay(s, FitModel::DecayingSine);
    CHECK(fit.converged);
    CHECK(std::abs(fit.get("T2") - 27e-6) < 1e-6);
    CHECK(std::abs(fit.get("f_beat") - 200e3) < 1e3);
    CHECK(fit.get("A") == doctest::Approx(0.5).epsilon(0.01));
    CHECK(fit.get("offset") == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("fit recovery on noiseless signals within 1%") {
    const std::vector<std::pair<FitModel, std::vector<double>>> cases = {
        {FitModel::Exp, {0.9, 4.2e-6, 0.05}},
        {FitModel::DecayingSine, {0.45, 7.5e-6, 215e3, 0.4, 0.5}},
        {FitModel::ExpPlusDecayingSine, {0.8, 6e-6, 0.15, 3e-6, 340e3, 0.7, 0.03}},
    };
    for (const auto &[model, truth] : cases) {
        CAPTURE(to_string(model));
        DecaySignal s;
        for (int i = 0; i < 501; ++i) {
            const double t = 25e-6 * i / 500;
            s.t_axis.push_back(t);
            s.value.push_back(evaluate_model(model, truth, t));
        }
        const auto fit = fit_decay(s, model);
        CHECK(fit.converged);
        const auto got = fit.values();
        for (std::size_t k = 0; k < truth.size(); ++k) {
            CAPTURE(k);
            CHECK(std::abs(got[k] - truth[k]) <= 0.01 * std::abs(truth[k]));
        }

        // refitting from the converged point is a fixed point
        const auto again = fit_decay(s, model, got);
        for (std::size_t k = 0; k < truth.size(); ++k) {
            CHECK(std::abs(again.values()[k] - got[k]) <= 1e-8 * std::abs(got[k]));
        }
    }
}

TEST_CASE("fit input validation and names") {
    DecaySignal s;
    s.t_axis = {0, 1, 2};
    s.value = {1, 0.5, 0.25};
    CHECK_THROWS_AS(fit_decay(s, FitModel::Exp), InvalidInput);
    CHECK(parameter_names(FitModel::ExpPlusDecayingSine).size() == 7);
    CHECK(fit_model_from_string("exp+decaying-sine") == FitModel::ExpPlusDecayingSine);
    CHECK_THROWS_AS(fit_model_from_string("gauss"), InvalidInput);
}

TEST_CASE("decay and fit CSV formats") {
    DecaySignal s;
    for (int i = 0; i < 20; ++i) {
        s.t_axis.push_back(1e-6 * i);
        s.value.push_back(std::exp(-0.1 * i) + 0.1);
    }
    const auto csv = format_decay_csv(s);
    CHECK(csv.rfind("tau_s,value\n", 0) == 0);
    const auto back = parse_decay_csv(csv);
    CHECK(back.t_axis == s.t_axis);
    CHECK(back.value == s.value);
    CHECK_THROWS_AS(parse_decay_csv("t,v\n0,1\n"), IoError);

    const auto fit = fit_decay(s, FitModel::Exp);
    const auto f = format_fit_csv(fit);
    CHECK(f.rfind("model,param,value,stderr\nexp,A,", 0) == 0);
    CHECK(f.find("exp,T1,") != std::string::npos);
    CHECK(f.find("exp,converged,1") != std::string::npos);
}

// Known discrepancy: the semi-continuum overlap carries its strongest beat near
// 0.1-0.2 MHz; nothing shows up at the discrete m = 0/1 splitting.
TEST_CASE("semi-continuum phonon T1 signal beats near the m = 0/1 splitting" * doctest::may_fail()) {
    const auto b = reference_basis(Picture::SemiContinuum, 81);
    const auto d = reference_basis();
    SwapPulse p;
    p.delta_q_during = kTwoPi * 75e3;
    p.duration = 0.77e-6;
    const auto sig = phonon_t1_signal(b, reference_qubit(), p, grid(0, 25e-6, 501));
    const auto fit = fit_decay(sig, FitModel::ExpPlusDecayingSine);
    const double split = (d.modes[1].omega - d.modes[0].omega) / kTwoPi;
    CHECK(std::abs(fit.get("f_beat") - split) <= 0.25 * split);
}

TEST_CASE("full-sequence T1 signal at zero delay applies the swap twice") {
    const auto b = reference_basis();
    const auto q = reference_qubit();
    SwapPulse pulse;
    pulse.delta_q_during = kTwoPi * 75e3;
    pulse.duration = 0.825e-6;
    CoherenceOptions opts;
    opts.variant = T1Variant::FullSequence;
    const auto tau = grid(0, 20e-6, 81);
    const auto sig = phonon_t1_signal(b, q, pulse, tau, opts);

    const auto det = b.detunings();
    const auto cpl = b.couplings();
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(5);
    c0[0] = 1.0;
    const auto in = oracle::propagate_linear(
        oracle::amplitude_generator(pulse.delta_q_during, q.gamma(), det, cpl, {}), c0, pulse.duration);
    const auto out = oracle::propagate_linear(
        oracle::amplitude_generator(pulse.delta_q_during, 0.0, det, cpl, {}), in, pulse.duration);
    CHECK(std::abs(sig.value.front() - std::norm(out[0])) < 1e-7);

    // storage at -3 MHz then retrieval, all from the same linear generator
    const auto parked = oracle::propagate_linear(
        oracle::amplitude_generator(opts.storage_detuning, q.gamma(), det, cpl, {}), in, tau[10]);
    const auto back = oracle::propagate_linear(
        oracle::amplitude_generator(pulse.delta_q_during, 0.0, det, cpl, {}), parked, pulse.duration);
    CHECK(std::abs(sig.value[10] - std::norm(back[0])) < 1e-7);

    opts.second_swap_qubit_decay = true;
    const auto with_decay = phonon_t1_signal(b, q, pulse, tau, opts);
    CHECK(with_decay.value.front() < sig.value.front());
}

TEST_CASE("T1 versus swap amplitude") {
    const auto b = reference_basis();
    SweepOptions o;
    o.pulse_time_grid = grid(0, 3e-6, 601);
    o.phonon_t1s.assign(4, 20e-6);
    const auto pts = t1_vs_swap_amplitude(b, reference_qubit(), hz_grid(-6e6, 6e6, 3), grid(0, 40e-6, 201), o);
    REQUIRE(pts.size() == 3);
    CHECK(std::abs(pts[0].t1_eff - 6e-6) <= 0.6e-6);
    CHECK(std::abs(pts[2].t1_eff - 6e-6) <= 0.6e-6);
    CHECK(pts[1].t1_eff > 6e-6);
    const auto csv = format_sweep_csv(pts);
    CHECK(csv.rfind("delta_q_hz,t1_eff_s,converged\n-6e+06,", 0) == 0);

    o.threads = 3;
    const auto again = t1_vs_swap_amplitude(b, reference_qubit(), hz_grid(-6e6, 6e6, 3), grid(0, 40e-6, 201), o);
    CHECK(format_sweep_csv(again) == csv);
}

TEST_CASE("imperfect swap leaves an oscillation at the storage detuning") {
    const auto b = reference_basis();
    SweepOptions o;
    o.pulse_time_grid = grid(0, 3e-6, 601);
    o.phonon_t1s.assign(4, 20e-6);
    const auto pts = t1_vs_swap_amplitude(b, reference_qubit(), std::vector<double>{kTwoPi * 0.8e6}, grid(0, 6e-6, 601), o);
    REQUIRE(pts.size() == 1);
    const auto &sig = pts[0].signal;
    std::vector<double> resid;
    for (std::size_t k = 0; k < sig.t_axis.size(); ++k) {
        resid.push_back(sig.value[k] - evaluate_model(FitModel::Exp, pts[0].fit.values(), sig.t_axis[k]));
    }
    const double f = dominant_frequency(sig.t_axis, resid, 1e6, 10e6);
    CHECK(f == doctest::Approx(3e6).epsilon(0.2));
}

} // TEST_SUITE
