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

#include <string>
#include <vector>

namespace pqed {

inline constexpr double kHbar = 1.054571817e-34; // J s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct ResonatorGeometry {
    double substrate_thickness_h = 420e-6;
    double transducer_diameter_d = 200e-6;
    double transducer_thickness_t = 0.9e-6;
    double big_cylinder_radius_R = 2e-3;

    /// Throws InvalidInput when a length is non-positive, d/2 >= R, or the
    /// transducer is not thin (t > h/10).
    void validate() const;
};

struct MaterialConstants {
    double v_longitudinal = 1.11e4;
    double v_transverse_effective = 8.78e3;
    double stiffness_c33 = 390e9;
    double piezo_d33 = 1e-12;
    double field_E0 = 2.9e-2;
    double coupling_scale = 1.0;

    void validate() const;
};

enum class Picture { Discrete, SemiContinuum };

const char *to_string(Picture p);
Picture picture_from_string(const std::string &s);

struct PhononMode {
    int l = 0;
    int m = 0;
    double omega = 0.0;        ///< rad/s
    double g = 0.0;            ///< rad/s
    double basis_radius = 0.0; ///< m
    double beta = 0.0;         ///< strain per phonon
};

struct ModeBasis {
    std::vector<PhononMode> modes;
    Picture picture = Picture::Discrete;

    std::size_t size() const { return modes.size(); }
    /// delta_m = omega_m - omega_0 (rotating frame at the m = 0 mode).
    std::vector<double> detunings() const;
    std::vector<double> couplings() const;
};

/// v_l / 2h in Hz.
double free_spectral_range(const ResonatorGeometry &geom, const MaterialConstants &mat);

/// Radius of the cylinder whose J0 modes form the basis: d/2 or R.
double basis_radius(Picture picture, const ResonatorGeometry &geom);

/// Angular frequency of mode (l, m) in a cylinder of the given radius.
/// An infinite radius removes the transverse term.
double mode_frequency(int l, int m, const ResonatorGeometry &geom, const MaterialConstants &mat,
                      double radius);

/// Strain amplitude that puts hbar*omega of elastic energy in the mode.
double mode_normalization(int l, int m, const ResonatorGeometry &geom,
                          const MaterialConstants &mat, double radius, double hbar = kHbar);

/// Piezoelectric coupling (rad/s) for a uniform field E0 over the
/// transducer, scaled by mat.coupling_scale. Positive for m = 0.
double coupling_strength(int l, int m, const ResonatorGeometry &geom,
                         const MaterialConstants &mat, double radius);

/// Modes m = 0..count-1 at overtone l. Rejects counts whose transverse term
/// exceeds the longitudinal one (outside the paraxial regime).
ModeBasis build_basis(int l, Picture picture, int count, const ResonatorGeometry &geom,
                      const MaterialConstants &mat);

/// `l,m,omega_hz,g_hz,beta,basis_radius_m`, 12 significant digits.
std::string format_basis_csv(const ModeBasis &basis);

} // namespace pqed
