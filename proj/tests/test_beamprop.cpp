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
#include <cstring>

#include "pqed/errors.hpp"
#include "pqed/fft.hpp"
#include "pqed/propagator.hpp"
#include "pqed/resonance.hpp"

using namespace pqed;

namespace {

BeamGrid small_grid(std::size_t n, double extent) {
    BeamGrid g;
    g.nx = g.ny = n;
    g.extent = extent;
    return g;
}

PropagatorConfig bare_config() {
    PropagatorConfig c;
    c.aln_enabled = false;
    c.absorber_enabled = false;
    c.roundtrips = 16;
    return c;
}

double norm2(const FieldMatrix &f, double dx) { return f.squaredNorm() * dx * dx; }

double second_moment_x(const FieldMatrix &f, const BeamGrid &g) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        for (std::size_t j = 0; j < g.ny; ++j) {
            const double p = std::norm(f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            num += g.x(i) * g.x(i) * p;
            den += p;
        }
    }
    return num / den;
}

FieldMatrix circular_shift(const FieldMatrix &f, long di, long dj) {
    FieldMatrix out(f.rows(), f.cols());
    const long n = f.rows(), m = f.cols();
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < m; ++j) {
            out((i + di + n) % n, (j + dj + m) % m) = f(i, j);
        }
    }
    return out;
}

double lcg_uniform(std::uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1.0p-53;
}

} // namespace

TEST_SUITE("beamprop") {

TEST_CASE("FFT inverse of forward is the identity and preserves energy") {
    for (auto planner : {FftPlanner::Estimate, FftPlanner::Measure}) {
        Fft2d fft(64, 32, planner);
        std::uint64_t seed = 7;
        std::vector<std::complex<double>> ref(fft.size());
        for (auto &v : ref) {
            v = {lcg_uniform(seed) - 0.5, lcg_uniform(seed) - 0.5};
        }
        std::copy(ref.begin(), ref.end(), fft.data());
        double e0 = 0, e1 = 0;
        for (const auto &v : ref) {
            e0 += std::norm(v);
        }
        fft.forward();
        for (std::size_t k = 0; k < fft.size(); ++k) {
            e1 += std::norm(fft.data()[k]);
        }
        CHECK(e1 / static_cast<double>(fft.size()) == doctest::Approx(e0).epsilon(1e-12));
        fft.inverse();
        double err = 0, nrm = 0;
        for (std::size_t k = 0; k < fft.size(); ++k) {
            err += std::norm(fft.data()[k] / static_cast<double>(fft.size()) - ref[k]);
            nrm += std::norm(ref[k]);
        }
        CHECK(std::sqrt(err / nrm) < 1e-12);
    }
    CHECK(fft_planner_from_string("measure") == FftPlanner::Measure);
    CHECK_THROWS_AS(fft_planner_from_string("patient"), InvalidInput);
}

TEST_CASE("initial disk field") {
    const auto g = small_grid(256, 1.2e-3);
    const auto cfg = bare_config();
    const auto f = initial_field(cfg, g, kTwoPi * 6.6e9);
    const double r = cfg.geom.transducer_diameter_d / 2;
    const double dx = g.dx();
    CHECK(std::abs(f.norm2() - kPi * r * r) <= kTwoPi * r * dx);
    bool real_nonneg = true, symmetric = true;
    for (std::size_t i = 1; i < g.nx; ++i) {
        for (std::size_t j = 1; j < g.ny; ++j) {
            const auto v = f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            real_nonneg &= v.imag() == 0.0 && v.real() >= 0.0;
            symmetric &= v == f.values(static_cast<Eigen::Index>(g.nx - i), static_cast<Eigen::Index>(g.ny - j));
        }
    }
    CHECK(real_nonneg);
    CHECK(symmetric);
    CHECK_THROWS_AS(initial_field(cfg, small_grid(16, 1.2e-3), 1e9), InvalidInput);
}

TEST_CASE("grid and configuration validation") {
    const ResonatorGeometry geom;
    CHECK_THROWS_AS(small_grid(100, 1.2e-3).validate(geom), InvalidInput);
    CHECK_THROWS_AS(small_grid(128, 0.3e-3).validate(geom), InvalidInput);
    CHECK_NOTHROW(small_grid(128, 0.4e-3).validate(geom));
    PropagatorConfig c;
    c.absorber_width = 0.4e-3;
    CHECK_THROWS_AS(c.validate(small_grid(128, 1.2e-3)), InvalidInput);
    c = PropagatorConfig{};
    c.roundtrips = 8;
    CHECK_THROWS_AS(c.validate(small_grid(128, 1.2e-3)), InvalidInput);
    CHECK(PropagatorConfig{}.free_spectral_range() == doctest::Approx(11110.0 / (2 * 420e-6)));
}

TEST_CASE("plane wave keeps its norm without masks") {
    const auto g = small_grid(128, 1.2e-3);
    auto cfg = bare_config();
    RoundtripPropagator prop(cfg, g, kTwoPi * 6.6e9);
    FieldMatrix f = FieldMatrix::Constant(128, 128, std::complex<double>(0.3, 0.1));
    const double n0 = norm2(f, g.dx());
    for (int r = 0; r < 10; ++r) {
        prop.apply(f);
    }
    CHECK(std::abs(norm2(f, g.dx()) - n0) <= 1e-10 * n0);
}

TEST_CASE("norm loss equals the evanescent energy") {
    // low frequency and fine pixels so that part of the spectrum is evanescent
    const auto g = small_grid(256, 0.4e-3);
    const auto cfg = bare_config();
    const double omega = kTwoPi * 0.66e9;
    const double vl = cfg.mat_substrate.v_longitudinal, vt = cfg.mat_substrate.v_transverse_effective;
    RoundtripPropagator prop(cfg, g, omega);
    const auto start = initial_field(cfg, g, omega).values;

    Fft2d fft(256, 256);
    std::copy(start.data(), start.data() + start.size(), fft.data());
    fft.forward();
    const double n = 256.0 * 256.0;
    const double dx = g.dx();
    double lost = 0, evanescent = 0;
    for (std::size_t i = 0; i < 256; ++i) {
        for (std::size_t j = 0; j < 256; ++j) {
            const double kx = kTwoPi * static_cast<double>(i < 128 ? long(i) : long(i) - 256) / g.extent;
            const double ky = kTwoPi * static_cast<double>(j < 128 ? long(j) : long(j) - 256) / g.extent;
            const double arg = (omega * omega - vt * vt * (kx * kx + ky * ky)) / (vl * vl);
            if (arg < 0) {
                const double e = std::norm(fft.data()[i * 256 + j]) / n * dx * dx;
                evanescent += e;
                lost += e * (1 - std::exp(-2 * std::sqrt(-arg) * 2 * cfg.geom.substrate_thickness_h));
            }
        }
    }
    REQUIRE(evanescent > 1e-4 * norm2(start, dx));
    FieldMatrix f = start;
    prop.apply(f);
    const double before = norm2(start, dx), after = norm2(f, dx);
    CHECK(std::abs((before - after) - lost) <= 1e-10 * before);
    CHECK(lost == doctest::Approx(evanescent).epsilon(1e-6));
}

TEST_CASE("absorber never adds energy") {
    const auto g = small_grid(128, 1.2e-3);
    PropagatorConfig cfg;
    cfg.roundtrips = 16;
    RoundtripPropagator prop(cfg, g, kTwoPi * 6.6e9);
    FieldMatrix f = initial_field(cfg, g, kTwoPi * 6.6e9).values;
    double prev = norm2(f, g.dx());
    bool monotone = true;
    for (int r = 0; r < 40; ++r) {
        prop.apply(f);
        const double cur = norm2(f, g.dx());
        monotone &= cur <= prev * (1 + 1e-12);
        prev = cur;
    }
    CHECK(monotone);
    CHECK(prev < norm2(initial_field(cfg, g, kTwoPi * 6.6e9).values, g.dx()));
}

TEST_CASE("Gaussian beam spreads at the paraxial diffraction rate") {
    const auto g = small_grid(256, 1.2e-3);
    const auto cfg = bare_config();
    const double omega = kTwoPi * 6.65e9;
    const double vl = cfg.mat_substrate.v_longitudinal, vt = cfg.mat_substrate.v_transverse_effective;
    const double w0 = 30e-6;
    FieldMatrix f(256, 256);
    for (std::size_t i = 0; i < 256; ++i) {
        for (std::size_t j = 0; j < 256; ++j) {
            const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
            f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-r2 / (w0 * w0));
        }
    }
    const double m0 = second_moment_x(f, g);
    CHECK(m0 == doctest::Approx(w0 * w0 / 4).epsilon(1e-3));
    RoundtripPropagator prop(cfg, g, omega);
    const int n = 10;
    for (int r = 0; r < n; ++r) {
        prop.apply(f);
    }
    const double z = n * 2 * cfg.geom.substrate_thickness_h;
    const double k_eff = omega * vl / (vt * vt);
    const double z_r = k_eff * w0 * w0 / 2;
    const double growth = second_moment_x(f, g) - m0;
    const double expected = w0 * w0 / 4 * (z / z_r) * (z / z_r);
    CHECK(growth == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("spectrum is invariant under whole-pixel translation") {
    const auto g = small_grid(64, 0.4e-3);
    const auto cfg = bare_config();
    const double omega = kTwoPi * 503 * cfg.free_spectral_range();
    RoundtripPropagator prop(cfg, g, omega);
    const auto disk = initial_field(cfg, g, omega).values;
    const double a = prop.complex_sum(disk).squaredNorm();
    const double b = prop.complex_sum(circular_shift(disk, 5, -3)).squaredNorm();
    CHECK(b == doctest::Approx(a).epsilon(1e-10));
}

TEST_CASE("flat cavity resonances are one free spectral range apart") {
    const auto g = small_grid(64, 0.4e-3);
    auto cfg = bare_config();
    cfg.absorber_enabled = true;
    cfg.absorber_width = 60e-6;
    cfg.roundtrips = 200;
    const double fsr = cfg.free_spectral_range();
    std::vector<double> axis;
    const int per = 200;
    for (int k = 0; k <= 2 * per; ++k) {
        axis.push_back((502.5 + static_cast<double>(k) / per) * fsr);
    }
    const auto spec = frequency_sweep(cfg, g, axis);
    const double step = fsr / per;
    // strongest peak in each FSR-wide half of the axis
    std::vector<double> best(2, 0.0), best_i(2, -1.0);
    for (const auto &p : spec.peaks) {
        const int half = p.frequency < 503.5 * fsr ? 0 : 1;
        if (p.prominence > best[static_cast<std::size_t>(half)]) {
            best[static_cast<std::size_t>(half)] = p.prominence;
            best_i[static_cast<std::size_t>(half)] = p.frequency;
        }
    }
    REQUIRE(best_i[0] > 0);
    REQUIRE(best_i[1] > 0);
    CHECK(std::abs((best_i[1] - best_i[0]) - fsr) <= 2 * step);
}

TEST_CASE("uniform phase mask shifts the resonance") {
    const auto g = small_grid(64, 0.4e-3);
    auto cfg = bare_config();
    cfg.roundtrips = 200;
    const double fsr = cfg.free_spectral_range();
    const auto peak_near = [&](double phi) {
        auto c = cfg;
        c.custom_mask = [phi](double, double, double) { return std::polar(1.0, phi); };
        std::vector<double> axis;
        for (int k = -100; k <= 100; ++k) {
            axis.push_back(503 * fsr + k * fsr / 800);
        }
        SweepConfig s;
        s.enforce_coverage = false;
        const auto spec = frequency_sweep(c, g, axis, s);
        const auto it = std::max_element(spec.intensity.begin(), spec.intensity.end());
        return axis[static_cast<std::size_t>(it - spec.intensity.begin())];
    };
    const double f0 = peak_near(0.0);
    const double up = peak_near(-0.3), down = peak_near(0.3), further = peak_near(0.6);
    const double bin = fsr / 800;
    CHECK(std::abs((up - f0) - 0.3 / kTwoPi * fsr) <= bin);
    CHECK(std::abs((down - f0) + 0.3 / kTwoPi * fsr) <= bin);
    CHECK(further < down);
}

TEST_CASE("sweep validation and determinism") {
    const auto g = small_grid(64, 0.4e-3);
    auto cfg = bare_config();
    const double fsr = cfg.free_spectral_range();
    std::vector<double> coarse;
    for (int k = 0; k <= 10; ++k) {
        coarse.push_back(503 * fsr + k * fsr / 10);
    }
    CHECK_THROWS_AS(frequency_sweep(cfg, g, coarse), InvalidInput);
    std::vector<double> narrow;
    for (int k = 0; k <= 10; ++k) {
        narrow.push_back(503 * fsr + k * fsr / 400);
    }
    CHECK_THROWS_AS(frequency_sweep(cfg, g, narrow), InvalidInput);
    SweepConfig s;
    s.enforce_coverage = false;
    const auto one = frequency_sweep(cfg, g, narrow, s);
    s.threads = 3;
    const auto three = frequency_sweep(cfg, g, narrow, s);
    CHECK(format_spectrum_csv(one) == format_spectrum_csv(three));
    CHECK(format_spectrum_csv(one).rfind("freq_hz,intensity\n", 0) == 0);
    CHECK(one.intensity[0] == doctest::Approx(resonance_intensity(cfg, g, narrow[0])).epsilon(1e-14));
}

TEST_CASE("peak detection by prominence") {
    std::vector<double> f, v;
    const auto lor = [](double x, double x0, double w) { return 1.0 / (1 + std::pow((x - x0) / w, 2)); };
    for (int k = 0; k <= 1000; ++k) {
        const double x = k * 1.0;
        f.push_back(x);
        v.push_back(10 * lor(x, 200, 5) + 1.0 * lor(x, 500, 5) + 0.02 * lor(x, 800, 5));
    }
    const auto peaks = find_peaks(f, v, 0.003);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].frequency == 200);
    CHECK(peaks[1].frequency == 500);
    // prominence is in intensity units, measured down to the higher saddle
    const double saddle = *std::min_element(v.begin() + 200, v.begin() + 500);
    CHECK(peaks[1].prominence == doctest::Approx(v[500] - saddle).epsilon(1e-12));
    CHECK(find_peaks(f, v, 0.0005).size() == 3);
    CHECK_THROWS_AS(find_peaks(f, std::vector<double>(3, 0.0), 0.1), InvalidInput);
}

TEST_CASE("mode convergence on a flat cavity") {
    const auto g = small_grid(64, 0.4e-3);
    auto cfg = bare_config();
    cfg.absorber_enabled = true;
    cfg.absorber_width = 60e-6;
    cfg.roundtrips = 100;
    const double freq = 503 * cfg.free_spectral_range();
    const auto mode = converge_mode(cfg, g, freq);
    CHECK(mode.residual < 1e-6);
    CHECK(mode.field.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    const auto &h = mode.residual_history;
    REQUIRE(h.size() >= 4);
    bool monotone = true;
    for (std::size_t k = 3; k < h.size(); ++k) {
        monotone &= h[k] <= h[k - 1];
    }
    CHECK(monotone);

    // one more iteration is a fixed point
    RoundtripPropagator prop(cfg, g, kTwoPi * freq);
    FieldMatrix next = prop.complex_sum(mode.field.values);
    next /= std::sqrt(next.squaredNorm()) * g.dx();
    const auto ov = (mode.field.values.conjugate().cwiseProduct(next)).sum();
    next *= std::conj(ov) / std::abs(ov);
    CHECK(std::sqrt((next - mode.field.values).squaredNorm() / mode.field.values.squaredNorm()) < 1e-6);

    ConvergeOptions tight;
    tight.max_iterations = 1;
    CHECK_THROWS_AS(converge_mode(cfg, g, freq, tight), NumericalError);
}

TEST_CASE("guided mode under the transducer") {
    const auto g = small_grid(128, 1.2e-3);
    PropagatorConfig cfg;
    cfg.roundtrips = 200;
    const double fsr = cfg.free_spectral_range();
    std::vector<double> axis;
    for (int k = -40; k <= 40; ++k) {
        axis.push_back(503 * fsr - 1.12e6 + k * 5e3);
    }
    SweepConfig s;
    s.enforce_coverage = false;
    const auto spec = frequency_sweep(cfg, g, axis, s);
    const auto it = std::max_element(spec.intensity.begin(), spec.intensity.end());
    const double freq = axis[static_cast<std::size_t>(it - spec.intensity.begin())];
    const auto mode = converge_mode(cfg, g, freq);
    CHECK(energy_fraction_within(mode.field, cfg.geom.transducer_diameter_d / 2) >= 0.6);
}

TEST_CASE("mode binary layout and round trip") {
    AcousticField f;
    f.grid = small_grid(8, 4e-4);
    f.values = FieldMatrix(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
        for (Eigen::Index j = 0; j < 8; ++j) {
            f.values(i, j) = {0.25 * static_cast<double>(i), -0.5 * static_cast<double>(j)};
        }
    }
    const auto bytes = encode_mode_binary(f);
    REQUIRE(bytes.size() == 32 + 64 * 8);
    CHECK(bytes.substr(0, 8) == "PQEDMOD1");
    const auto u8 = [&](std::size_t k) { return static_cast<unsigned>(static_cast<unsigned char>(bytes[k])); };
    CHECK(u8(8) == 8);
    CHECK(u8(9) == 0);
    CHECK(u8(12) == 8);
    double dx;
    std::memcpy(&dx, bytes.data() + 16, 8);
    CHECK(dx == f.grid.dx());
    for (std::size_t k = 24; k < 32; ++k) {
        CHECK(u8(k) == 0);
    }
    // pixel (1, 2) is the 11th pair: re = 0.25, im = -1.0
    float re, im;
    std::memcpy(&re, bytes.data() + 32 + 10 * 8, 4);
    std::memcpy(&im, bytes.data() + 32 + 10 * 8 + 4, 4);
    CHECK(re == 0.25f);
    CHECK(im == -1.0f);

    const auto back = decode_mode_binary(bytes);
    CHECK(back.grid.nx == 8);
    CHECK(back.grid.dx() == doctest::Approx(f.grid.dx()).epsilon(1e-15));
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(decode_mode_binary("PQEDMODX" + bytes.substr(8)), IoError);
    CHECK_THROWS_AS(decode_mode_binary(bytes.substr(0, bytes.size() - 4)), IoError);
    CHECK_THROWS_AS(decode_mode_binary("short"), IoError);
}

} // TEST_SUITE
