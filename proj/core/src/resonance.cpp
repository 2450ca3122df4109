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

#include "pqed/resonance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "pqed/csv.hpp"
#include "pqed/errors.hpp"
#include "pqed/parallel.hpp"

namespace pqed {

namespace {

constexpr char kMagic[8] = {'P', 'Q', 'E', 'D', 'M', 'O', 'D', '1'};
constexpr std::size_t kHeaderBytes = 32;

template <class T>
void put_le(std::string &out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    out.append(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <class T>
T get_le(const std::string &in, std::size_t offset) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, in.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

void normalize(FieldMatrix &f, double dx) {
    const double n = std::sqrt(f.squaredNorm()) * dx;
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NumericalError("converge_mode: field vanished or diverged");
    }
    f /= n;
}

} // namespace

double resonance_intensity(const PropagatorConfig &cfg, const BeamGrid &grid, double freq_hz) {
    const double omega = kTwoPi * freq_hz;
    RoundtripPropagator prop(cfg, grid, omega);
    const auto start = initial_field(cfg, grid, omega);
    const FieldMatrix sum = prop.complex_sum(start.values);
    const double dx = grid.dx();
    return sum.squaredNorm() * dx * dx;
}

ResonanceSpectrum frequency_sweep(const PropagatorConfig &cfg, const BeamGrid &grid,
                                  const std::vector<double> &freq_axis, const SweepConfig &sweep) {
    cfg.validate(grid);
    if (freq_axis.size() < 3) {
        throw InvalidInput("frequency sweep needs at least 3 frequencies");
    }
    double max_step = 0.0;
    for (std::size_t i = 1; i < freq_axis.size(); ++i) {
        if (!(freq_axis[i] > freq_axis[i - 1])) {
            throw InvalidInput("frequency axis must be strictly increasing");
        }
        max_step = std::max(max_step, freq_axis[i] - freq_axis[i - 1]);
    }
    if (sweep.enforce_coverage) {
        const double fsr = cfg.free_spectral_range();
        const double span = freq_axis.back() - freq_axis.front();
        if (span < fsr * (1 - 1e-9)) {
            std::ostringstream msg;
            msg << "frequency sweep spans " << span << " Hz, less than one FSR (" << fsr << " Hz)";
            throw InvalidInput(msg.str());
        }
        if (max_step > fsr / 200 * (1 + 1e-9)) {
            std::ostringstream msg;
            msg << "frequency step " << max_step << " Hz is coarser than FSR/200 (" << fsr / 200
                << " Hz)";
            throw InvalidInput(msg.str());
        }
    }
    // fails early on an unresolved disk
    (void)initial_field(cfg, grid, kTwoPi * freq_axis.front());

    ResonanceSpectrum out;
    out.freq_axis = freq_axis;
    out.intensity.assign(freq_axis.size(), 0.0);
    parallel_for(freq_axis.size(), sweep.threads, [&](std::size_t i) {
        out.intensity[i] = resonance_intensity(cfg, grid, freq_axis[i]);
    });
    out.peaks = find_peaks(out.freq_axis, out.intensity, sweep.min_prominence);
    return out;
}

std::vector<Peak> find_peaks(const std::vector<double> &freq_axis,
                             const std::vector<double> &intensity,
                             double min_relative_prominence) {
    if (freq_axis.size() != intensity.size()) {
        throw InvalidInput("find_peaks: axis and intensity lengths differ");
    }
    std::vector<Peak> peaks;
    const std::size_t n = intensity.size();
    if (n < 3) {
        return peaks;
    }
    const double top = *std::max_element(intensity.begin(), intensity.end());
    if (!(top > 0.0)) {
        return peaks;
    }
    const double threshold = min_relative_prominence * top;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (!(intensity[i] > intensity[i - 1])) {
            ++i;
            continue;
        }
        // extend over a flat top
        std::size_t j = i;
        while (j + 1 < n && intensity[j + 1] == intensity[i]) {
            ++j;
        }
        if (j + 1 >= n || !(intensity[j + 1] < intensity[i])) {
            i = j + 1;
            continue;
        }
        const double h = intensity[i];
        double left = h;
        for (std::size_t k = i; k-- > 0;) {
            if (intensity[k] > h) {
                break;
            }
            left = std::min(left, intensity[k]);
        }
        double right = h;
        for (std::size_t k = j + 1; k < n; ++k) {
            if (intensity[k] > h) {
                break;
            }
            right = std::min(right, intensity[k]);
        }
        const double prominence = h - std::max(left, right);
        if (prominence >= threshold) {
            peaks.push_back({freq_axis[(i + j) / 2], prominence});
        }
        i = j + 1;
    }
    return peaks;
}

ConvergedMode converge_mode(const PropagatorConfig &cfg, const BeamGrid &grid, double freq_hz,
                            const ConvergeOptions &opts,
                            const std::optional<AcousticField> &initial) {
    if (opts.max_iterations < 1) {
        throw InvalidInput("converge_mode: max_iterations must be >= 1");
    }
    const double omega = kTwoPi * freq_hz;
    RoundtripPropagator prop(cfg, grid, omega);
    const double dx = grid.dx();

    ConvergedMode out;
    FieldMatrix current = initial ? initial->values : initial_field(cfg, grid, omega).values;
    if (static_cast<std::size_t>(current.rows()) != grid.nx ||
        static_cast<std::size_t>(current.cols()) != grid.ny) {
        throw InvalidInput("converge_mode: initial field does not match the grid");
    }
    normalize(current, dx);
    for (int it = 1; it <= opts.max_iterations; ++it) {
        FieldMatrix next = prop.complex_sum(current);
        normalize(next, dx);
        const std::complex<double> overlap = (current.conjugate().cwiseProduct(next)).sum();
        if (std::abs(overlap) > 0.0) {
            next *= std::conj(overlap) / std::abs(overlap);
        }
        const double residual = std::sqrt((next - current).squaredNorm() / current.squaredNorm());
        out.residual_history.push_back(residual);
        current = std::move(next);
        out.iterations = it;
        out.residual = residual;
        if (residual < opts.tolerance) {
            out.field.grid = grid;
            out.field.frequency = omega;
            out.field.values = std::move(current);
            return out;
        }
    }
    std::ostringstream msg;
    msg << "converge_mode: no convergence after " << opts.max_iterations
        << " iterations (last relative change " << out.residual << ")";
    throw NumericalError(msg.str());
}

double energy_fraction_within(const AcousticField &field, double radius) {
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < field.grid.nx; ++i) {
        for (std::size_t j = 0; j < field.grid.ny; ++j) {
            const double p =
                std::norm(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            total += p;
            if (std::hypot(field.grid.x(i), field.grid.y(j)) <= radius) {
                inside += p;
            }
        }
    }
    return total > 0.0 ? inside / total : 0.0;
}

std::string format_spectrum_csv(const ResonanceSpectrum &s) {
    std::string out = "freq_hz,intensity\n";
    for (std::size_t i = 0; i < s.freq_axis.size(); ++i) {
        out += io::format_shortest(s.freq_axis[i]) + ',' + io::format_shortest(s.intensity[i]) +
               '\n';
    }
    return out;
}

std::string format_peaks_csv(const ResonanceSpectrum &s) {
    std::string out = "freq_hz,prominence\n";
    for (const auto &p : s.peaks) {
        out += io::format_shortest(p.frequency) + ',' + io::format_shortest(p.prominence) + '\n';
    }
    return out;
}

std::string encode_mode_binary(const AcousticField &field) {
    const std::size_t nx = field.grid.nx, ny = field.grid.ny;
    if (static_cast<std::size_t>(field.values.rows()) != nx ||
        static_cast<std::size_t>(field.values.cols()) != ny) {
        throw InvalidInput("mode binary: field does not match its grid");
    }
    std::string out;
    out.reserve(kHeaderBytes + nx * ny * 8);
    out.append(kMagic, sizeof(kMagic));
    put_le(out, static_cast<std::uint32_t>(nx));
    put_le(out, static_cast<std::uint32_t>(ny));
    put_le(out, field.grid.dx());
    put_le(out, std::uint64_t{0});
    for (Eigen::Index i = 0; i < field.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < field.values.cols(); ++j) {
            put_le(out, static_cast<float>(field.values(i, j).real()));
            put_le(out, static_cast<float>(field.values(i, j).imag()));
        }
    }
    return out;
}

AcousticField decode_mode_binary(const std::string &bytes) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw IoError("mode binary: bad magic");
    }
    const auto nx = get_le<std::uint32_t>(bytes, 8);
    const auto ny = get_le<std::uint32_t>(bytes, 12);
    const auto dx = get_le<double>(bytes, 16);
    const std::size_t expected = kHeaderBytes + static_cast<std::size_t>(nx) * ny * 8;
    if (bytes.size() != expected) {
        throw IoError("mode binary: size does not match the header");
    }
    AcousticField f;
    f.grid.nx = nx;
    f.grid.ny = ny;
    f.grid.extent = dx * nx;
    f.values.resize(nx, ny);
    std::size_t off = kHeaderBytes;
    for (std::uint32_t i = 0; i < nx; ++i) {
        for (std::uint32_t j = 0; j < ny; ++j) {
            const float re = get_le<float>(bytes, off);
            const float im = get_le<float>(bytes, off + 4);
            f.values(i, j) = {re, im};
            off += 8;
        }
    }
    return f;
}

void write_mode_binary(const std::filesystem::path &path, const AcousticField &field) {
    io::write_file_atomic(path, encode_mode_binary(field));
}

AcousticField read_mode_binary(const std::filesystem::path &path) {
    return decode_mode_binary(io::read_file(path));
}

} // namespace pqed
