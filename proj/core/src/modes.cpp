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

#include "pqed/modes.hpp"

#include <cmath>
#include <sstream>

#include "pqed/bessel.hpp"
#include "pqed/csv.hpp"
#include "pqed/errors.hpp"

namespace pqed {

namespace {

void require_positive(double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput(std::string(name) + " must be positive and finite");
    }
}

void check_indices(int l, int m, double radius) {
    if (l < 1) {
        throw InvalidInput("longitudinal mode number l must be >= 1");
    }
    if (m < 0) {
        throw InvalidInput("transverse mode number m must be >= 0");
    }
    if (!(radius > 0.0)) {
        throw InvalidInput("basis radius must be positive");
    }
}

double longitudinal_k(int l, const ResonatorGeometry &geom) {
    return l * kPi / geom.substrate_thickness_h;
}

} // namespace

void ResonatorGeometry::validate() const {
    require_positive(substrate_thickness_h, "substrate_thickness_h");
    require_positive(transducer_diameter_d, "transducer_diameter_d");
    require_positive(transducer_thickness_t, "transducer_thickness_t");
    require_positive(big_cylinder_radius_R, "big_cylinder_radius_R");
    if (transducer_diameter_d / 2 >= big_cylinder_radius_R) {
        throw InvalidInput("transducer radius d/2 must be smaller than R");
    }
    if (transducer_thickness_t > 0.1 * substrate_thickness_h) {
        throw InvalidInput("transducer_thickness_t must be much smaller than the substrate");
    }
}

void MaterialConstants::validate() const {
    require_positive(v_longitudinal, "v_longitudinal");
    require_positive(v_transverse_effective, "v_transverse_effective");
    require_positive(stiffness_c33, "stiffness_c33");
    if (!std::isfinite(piezo_d33) || !std::isfinite(field_E0)) {
        throw InvalidInput("piezo_d33 and field_E0 must be finite");
    }
    if (!(coupling_scale > 0.0 && coupling_scale <= 2.0)) {
        throw InvalidInput("coupling_scale must lie in (0, 2]");
    }
}

const char *to_string(Picture p) {
    return p == Picture::Discrete ? "discrete" : "semi-continuum";
}

Picture picture_from_string(const std::string &s) {
    if (s == "discrete") {
        return Picture::Discrete;
    }
    if (s == "semi-continuum" || s == "semicontinuum") {
        return Picture::SemiContinuum;
    }
    throw InvalidInput("unknown picture '" + s + "' (expected discrete or semi-continuum)");
}

std::vector<double> ModeBasis::detunings() const {
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto &mode : modes) {
        out.push_back(mode.omega - modes.front().omega);
    }
    return out;
}

std::vector<double> ModeBasis::couplings() const {
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto &mode : modes) {
        out.push_back(mode.g);
    }
    return out;
}

double free_spectral_range(const ResonatorGeometry &geom, const MaterialConstants &mat) {
    return mat.v_longitudinal / (2.0 * geom.substrate_thickness_h);
}

double basis_radius(Picture picture, const ResonatorGeometry &geom) {
    return picture == Picture::Discrete ? geom.transducer_diameter_d / 2
                                        : geom.big_cylinder_radius_R;
}

double mode_frequency(int l, int m, const ResonatorGeometry &geom, const MaterialConstants &mat,
                      double radius) {
    check_indices(l, m, radius);
    const double kl = longitudinal_k(l, geom) * mat.v_longitudinal;
    if (std::isinf(radius)) {
        return kl;
    }
    const double kt = special::bessel_j0_root(m) / radius * mat.v_transverse_effective;
    return std::sqrt(kl * kl + kt * kt);
}

double mode_normalization(int l, int m, const ResonatorGeometry &geom,
                          const MaterialConstants &mat, double radius, double hbar) {
    check_indices(l, m, radius);
    const double j = special::bessel_j0_root(m);
    const double j1 = special::bessel_j1(j);
    // int_0^radius J0(j r/radius)^2 r dr
    const double radial = radius * radius * j1 * j1 / 2;
    const double omega = mode_frequency(l, m, geom, mat, radius);
    return std::sqrt(hbar * omega / (kPi * geom.substrate_thickness_h * mat.stiffness_c33 * radial));
}

double coupling_strength(int l, int m, const ResonatorGeometry &geom,
                         const MaterialConstants &mat, double radius) {
    check_indices(l, m, radius);
    const double a = geom.transducer_diameter_d / 2;
    if (a > radius * (1 + 1e-12)) {
        throw InvalidInput("transducer radius exceeds the basis radius");
    }
    const double j = special::bessel_j0_root(m);
    // int_0^{d/2} J0(j r/radius) r dr
    const double overlap = a * radius * special::bessel_j1(j * a / radius) / j;
    const double lambda_a = 2.0 * geom.transducer_thickness_t;
    const double beta = mode_normalization(l, m, geom, mat, radius);
    const double hbar_g =
        2.0 * mat.stiffness_c33 * mat.piezo_d33 * mat.field_E0 * lambda_a * beta * overlap;
    return mat.coupling_scale * hbar_g / kHbar;
}

ModeBasis build_basis(int l, Picture picture, int count, const ResonatorGeometry &geom,
                      const MaterialConstants &mat) {
    geom.validate();
    mat.validate();
    if (count < 1) {
        throw InvalidInput("mode count must be >= 1");
    }
    if (l < 1) {
        throw InvalidInput("longitudinal mode number l must be >= 1");
    }
    const double radius = basis_radius(picture, geom);
    const double kl = longitudinal_k(l, geom) * mat.v_longitudinal;
    const double kt = special::bessel_j0_root(count - 1) / radius * mat.v_transverse_effective;
    if (kt > kl) {
        std::ostringstream msg;
        msg << "mode count " << count << " leaves the paraxial regime at l = " << l
            << ": transverse term " << kt << " rad/s exceeds longitudinal term " << kl
            << " rad/s";
        throw InvalidInput(msg.str());
    }
    ModeBasis basis;
    basis.picture = picture;
    basis.modes.reserve(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m) {
        PhononMode mode;
        mode.l = l;
        mode.m = m;
        mode.basis_radius = radius;
        mode.omega = mode_frequency(l, m, geom, mat, radius);
        mode.beta = mode_normalization(l, m, geom, mat, radius);
        mode.g = coupling_strength(l, m, geom, mat, radius);
        basis.modes.push_back(mode);
    }
    return basis;
}

std::string format_basis_csv(const ModeBasis &basis) {
    std::string out = "l,m,omega_hz,g_hz,beta,basis_radius_m\n";
    for (const auto &mode : basis.modes) {
        out += std::to_string(mode.l) + ',' + std::to_string(mode.m) + ',' +
               io::format_significant(mode.omega / kTwoPi, 12) + ',' +
               io::format_significant(mode.g / kTwoPi, 12) + ',' +
               io::format_significant(mode.beta, 12) + ',' +
               io::format_significant(mode.basis_radius, 12) + '\n';
    }
    return out;
}

} // namespace pqed
