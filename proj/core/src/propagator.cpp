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

#include "pqed/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pqed/errors.hpp"

namespace pqed {

namespace {

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// FFT frequency index -> angular wavenumber
double wavenumber(std::size_t i, std::size_t n, double dx) {
    const auto k = static_cast<double>(i < (n + 1) / 2 ? static_cast<long>(i)
                                                       : static_cast<long>(i) - static_cast<long>(n));
    return kTwoPi * k / (static_cast<double>(n) * dx);
}

} // namespace

double BeamGrid::x(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(nx / 2)) * dx();
}

double BeamGrid::y(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(ny / 2)) * dx();
}

void BeamGrid::validate(const ResonatorGeometry &geom) const {
    if (!power_of_two(nx) || !power_of_two(ny)) {
        throw InvalidInput("beam grid sizes must be powers of two");
    }
    if (!(extent > 0.0)) {
        throw InvalidInput("beam grid extent must be positive");
    }
    if (extent < 2.0 * geom.transducer_diameter_d) {
        throw InvalidInput("beam grid extent must be at least twice the transducer diameter");
    }
}

double AcousticField::norm2() const {
    const double dx = grid.dx();
    return values.squaredNorm() * dx * dx;
}

const char *to_string(Dispersion d) {
    return d == Dispersion::EffectiveVelocity ? "effective-velocity" : "isotropic";
}

Dispersion dispersion_from_string(const std::string &s) {
    if (s == "effective-velocity") {
        return Dispersion::EffectiveVelocity;
    }
    if (s == "isotropic") {
        return Dispersion::Isotropic;
    }
    throw InvalidInput("unknown dispersion '" + s + "' (expected effective-velocity or isotropic)");
}

const char *to_string(SumWindow w) { return w == SumWindow::Hann ? "hann" : "rectangular"; }

SumWindow sum_window_from_string(const std::string &s) {
    if (s == "hann") {
        return SumWindow::Hann;
    }
    if (s == "rectangular") {
        return SumWindow::Rectangular;
    }
    throw InvalidInput("unknown window '" + s + "' (expected hann or rectangular)");
}

MaterialConstants PropagatorConfig::beamprop_substrate() {
    MaterialConstants m;
    m.v_longitudinal = 11110.0;
    m.v_transverse_effective = 6056.0;
    return m;
}

void PropagatorConfig::validate(const BeamGrid &grid) const {
    geom.validate();
    mat_substrate.validate();
    grid.validate(geom);
    if (!(v_aln_longitudinal > 0.0)) {
        throw InvalidInput("v_aln_longitudinal must be positive");
    }
    if (absorber_enabled) {
        if (!(absorber_width > 0.0) || absorber_width >= grid.extent / 4) {
            throw InvalidInput("absorber width must lie in (0, extent/4)");
        }
        if (!(absorber_strength >= 0.0)) {
            throw InvalidInput("absorber strength must be >= 0");
        }
    }
    if (roundtrips < 16) {
        throw InvalidInput("roundtrips must be >= 16");
    }
}

double PropagatorConfig::free_spectral_range() const {
    return pqed::free_spectral_range(geom, mat_substrate);
}

AcousticField initial_field(const PropagatorConfig &cfg, const BeamGrid &grid, double omega) {
    cfg.validate(grid);
    const double radius = cfg.geom.transducer_diameter_d / 2;
    if (cfg.geom.transducer_diameter_d / grid.dx() < 8.0) {
        std::ostringstream msg;
        msg << "transducer disk is unresolved: " << cfg.geom.transducer_diameter_d / grid.dx()
            << " pixels across (need >= 8)";
        throw InvalidInput(msg.str());
    }
    AcousticField f;
    f.grid = grid;
    f.frequency = omega;
    f.values = FieldMatrix::Zero(static_cast<Eigen::Index>(grid.nx),
                                 static_cast<Eigen::Index>(grid.ny));
    for (std::size_t i = 0; i < grid.nx; ++i) {
        for (std::size_t j = 0; j < grid.ny; ++j) {
            if (std::hypot(grid.x(i), grid.y(j)) <= radius) {
                f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
            }
        }
    }
    return f;
}

RoundtripPropagator::RoundtripPropagator(const PropagatorConfig &cfg, const BeamGrid &grid,
                                         double omega)
    : grid_(grid), roundtrips_(cfg.roundtrips), window_(cfg.window),
      fft_(grid.nx, grid.ny, cfg.planner) {
    cfg.validate(grid);
    const std::size_t nx = grid.nx, ny = grid.ny;
    const double dx = grid.dx();
    const double vl = cfg.mat_substrate.v_longitudinal;
    const double vt = cfg.mat_substrate.v_transverse_effective;
    const double path = 2.0 * cfg.geom.substrate_thickness_h;
    const double norm = 1.0 / static_cast<double>(nx * ny);

    kernel_.resize(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        const double kx = wavenumber(i, nx, dx);
        for (std::size_t j = 0; j < ny; ++j) {
            const double ky = wavenumber(j, ny, dx);
            const double kt2 = kx * kx + ky * ky;
            const double arg = cfg.dispersion == Dispersion::EffectiveVelocity
                                   ? (omega * omega - vt * vt * kt2) / (vl * vl)
                                   : (omega / vl) * (omega / vl) - kt2;
            std::complex<double> k;
            if (arg >= 0.0) {
                k = std::polar(norm, std::sqrt(arg) * path);
            } else {
                k = norm * std::exp(-std::sqrt(-arg) * path);
            }
            kernel_[i * ny + j] = k;
        }
    }

    const double radius = cfg.geom.transducer_diameter_d / 2;
    const std::complex<double> aln =
        std::polar(1.0, 2.0 * cfg.geom.transducer_thickness_t * omega / cfg.v_aln_longitudinal);
    const double half = grid.extent / 2;
    const double r_in = half - cfg.absorber_width;
    mask_.resize(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double x = grid.x(i), y = grid.y(j);
            const double r = std::hypot(x, y);
            std::complex<double> m = 1.0;
            if (cfg.custom_mask) {
                m = cfg.custom_mask(x, y, omega);
            } else if (cfg.aln_enabled && r <= radius) {
                m = aln;
            }
            if (cfg.absorber_enabled && r > r_in) {
                const double s = (r - r_in) / cfg.absorber_width;
                m *= std::exp(-cfg.absorber_strength * s * s * s * s);
            }
            mask_[i * ny + j] = m;
        }
    }
}

void RoundtripPropagator::step_buffer() {
    std::complex<double> *buf = fft_.data();
    const std::size_t n = fft_.size();
    fft_.forward();
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] *= kernel_[k];
    }
    fft_.inverse();
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] *= mask_[k];
    }
}

void RoundtripPropagator::apply(FieldMatrix &field) {
    if (static_cast<std::size_t>(field.size()) != fft_.size()) {
        throw InvalidInput("field does not match the propagator grid");
    }
    std::copy(field.data(), field.data() + field.size(), fft_.data());
    step_buffer();
    std::copy(fft_.data(), fft_.data() + field.size(), field.data());
}

FieldMatrix RoundtripPropagator::complex_sum(const FieldMatrix &input) {
    if (static_cast<std::size_t>(input.size()) != fft_.size()) {
        throw InvalidInput("field does not match the propagator grid");
    }
    FieldMatrix sum = FieldMatrix::Zero(input.rows(), input.cols());
    std::copy(input.data(), input.data() + input.size(), fft_.data());
    const std::complex<double> *buf = fft_.data();
    std::complex<double> *out = sum.data();
    const std::size_t n = fft_.size();
    const double big_n = static_cast<double>(roundtrips_);
    for (int r = 1; r <= roundtrips_; ++r) {
        step_buffer();
        double w = 1.0;
        if (window_ == SumWindow::Hann) {
            const double s = std::sin(kPi * (r - 0.5) / big_n);
            w = s * s;
        }
        for (std::size_t k = 0; k < n; ++k) {
            out[k] += w * buf[k];
        }
    }
    return sum;
}

AcousticField roundtrip(const AcousticField &field, const PropagatorConfig &cfg) {
    RoundtripPropagator prop(cfg, field.grid, field.frequency);
    AcousticField out = field;
    prop.apply(out.values);
    return out;
}

} // namespace pqed
