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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pqed/fft.hpp"
#include "pqed/modes.hpp"

namespace pqed {

using FieldMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square-pixel transverse grid centred on the resonator axis. Pixel (i, j)
/// sits at x = (i - nx/2) dx, y = (j - ny/2) dx.
struct BeamGrid {
    std::size_t nx = 1024;
    std::size_t ny = 1024;
    double extent = 1.2e-3; ///< side length along x (m)

    double dx() const { return extent / static_cast<double>(nx); }
    double x(std::size_t i) const;
    double y(std::size_t j) const;

    /// Power-of-two sizes, positive extent, extent >= 2 d.
    void validate(const ResonatorGeometry &geom) const;
};

struct AcousticField {
    BeamGrid grid;
    FieldMatrix values; ///< nx x ny
    double frequency = 0.0; ///< rad/s

    /// sum |psi|^2 dx^2
    double norm2() const;
};

enum class Dispersion {
    EffectiveVelocity, ///< k_z = sqrt(omega^2 - v_t^2 k_t^2) / v_l
    Isotropic,         ///< k_z = sqrt((omega / v_l)^2 - k_t^2)
};

enum class SumWindow {
    Hann,        ///< w_n = sin^2(pi (n - 1/2) / N)
    Rectangular, ///< w_n = 1
};

const char *to_string(Dispersion d);
Dispersion dispersion_from_string(const std::string &s);
const char *to_string(SumWindow w);
SumWindow sum_window_from_string(const std::string &s);

/// Per-pixel complex factor applied once per roundtrip, as a function of
/// position (m) and angular frequency.
using PhaseMaskFn = std::function<std::complex<double>(double x, double y, double omega)>;

struct PropagatorConfig {
    ResonatorGeometry geom{};
    MaterialConstants mat_substrate = beamprop_substrate();
    double v_aln_longitudinal = 11008.0;
    double absorber_width = 180e-6;
    double absorber_strength = 5.0;
    int roundtrips = 400;
    bool aln_enabled = true;
    bool absorber_enabled = true;
    Dispersion dispersion = Dispersion::EffectiveVelocity;
    SumWindow window = SumWindow::Hann;
    FftPlanner planner = FftPlanner::Estimate;
    /// Replaces the AlN mask exp(i 2 t omega / v_AlN) over the disk when set.
    PhaseMaskFn custom_mask;

    /// Sapphire velocities used by the beam-propagation model.
    static MaterialConstants beamprop_substrate();

    void validate(const BeamGrid &grid) const;
    double free_spectral_range() const; ///< Hz
};

/// Unit-amplitude disk of diameter d on the grid centre, zero outside.
AcousticField initial_field(const PropagatorConfig &cfg, const BeamGrid &grid, double omega);

/// Roundtrip operator at one frequency with its transform plans and masks
/// precomputed. Not thread-safe; use one instance per worker.
class RoundtripPropagator {
  public:
    RoundtripPropagator(const PropagatorConfig &cfg, const BeamGrid &grid, double omega);

    /// One roundtrip in place: transform, angular-spectrum phase over 2h,
    /// inverse transform, AlN (or custom) mask, absorber.
    void apply(FieldMatrix &field);

    /// Weighted complex sum sum_{n=1..N} w_n psi_n of the z = 0 field over
    /// N = cfg.roundtrips roundtrips starting from `input`.
    FieldMatrix complex_sum(const FieldMatrix &input);

    const std::vector<std::complex<double>> &kernel() const { return kernel_; }
    const std::vector<std::complex<double>> &mask() const { return mask_; }

  private:
    void step_buffer();

    BeamGrid grid_;
    int roundtrips_;
    SumWindow window_;
    Fft2d fft_;
    std::vector<std::complex<double>> kernel_; ///< includes the 1/(nx ny) factor
    std::vector<std::complex<double>> mask_;
};

AcousticField roundtrip(const AcousticField &field, const PropagatorConfig &cfg);

} // namespace pqed
