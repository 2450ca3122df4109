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

#include "pqed/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "pqed/errors.hpp"

namespace pqed {

double amplitude_rate(double t1) {
    return std::isinf(t1) ? 0.0 : 1.0 / (2.0 * t1);
}

double QubitParams::gamma() const { return amplitude_rate(t1_qubit); }

void QubitParams::validate() const {
    if (!(t1_qubit > 0.0)) {
        throw InvalidInput("qubit t1 must be positive (or inf for a lossless qubit)");
    }
    if (!std::isfinite(detuning_delta_q)) {
        throw InvalidInput("qubit detuning must be finite");
    }
}

Eigen::MatrixXd single_excitation_hamiltonian(const ModeBasis &basis, double delta_q) {
    if (basis.modes.empty()) {
        throw InvalidInput("mode basis is empty");
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto det = basis.detunings();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    h(0, 0) = delta_q;
    for (Eigen::Index m = 0; m < n; ++m) {
        const auto um = static_cast<std::size_t>(m);
        h(0, m + 1) = basis.modes[um].g;
        h(m + 1, 0) = basis.modes[um].g;
        h(m + 1, m + 1) = det[um];
    }
    return h;
}

FockSpace::FockSpace(std::size_t modes, int truncation, std::size_t dimension_cap)
    : modes_(modes), truncation_(truncation), dim_(2) {
    if (modes == 0) {
        throw InvalidInput("Fock space needs at least one mode");
    }
    if (truncation < 2) {
        throw InvalidInput("fock_truncation must be >= 2");
    }
    // the qubit is counted as one more factor of size `truncation`
    double dim = static_cast<double>(truncation);
    for (std::size_t m = 0; m < modes; ++m) {
        dim *= truncation;
    }
    if (dim > static_cast<double>(dimension_cap)) {
        std::ostringstream msg;
        msg << "Hilbert space too large: " << truncation << "^" << modes + 1 << " = " << dim
            << " exceeds the cap of " << dimension_cap;
        throw InvalidInput(msg.str());
    }
    Eigen::Index d = 2;
    for (std::size_t m = 0; m < modes; ++m) {
        d *= truncation;
    }
    dim_ = d;
}

int FockSpace::digit(Eigen::Index state, std::size_t factor) const {
    // factor 0 = qubit, factor 1 + m = mode m
    Eigen::Index stride = 1;
    for (std::size_t k = modes_; k > factor; --k) {
        stride *= truncation_;
    }
    const Eigen::Index base = factor == 0 ? 2 : truncation_;
    return static_cast<int>((state / stride) % base);
}

Eigen::Index FockSpace::index(int qubit, const std::vector<int> &occupations) const {
    if (qubit < 0 || qubit > 1 || occupations.size() != modes_) {
        throw InvalidInput("product state does not match the Fock space");
    }
    Eigen::Index idx = qubit;
    for (int n : occupations) {
        if (n < 0 || n >= truncation_) {
            throw InvalidInput("mode occupation outside the Fock truncation");
        }
        idx = idx * truncation_ + n;
    }
    return idx;
}

Eigen::MatrixXcd FockSpace::qubit_lowering() const {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim_, dim_);
    const Eigen::Index half = dim_ / 2;
    for (Eigen::Index s = 0; s < half; ++s) {
        op(s, s + half) = 1.0;
    }
    return op;
}

Eigen::MatrixXcd FockSpace::mode_lowering(std::size_t m) const {
    if (m >= modes_) {
        throw InvalidInput("mode index out of range");
    }
    Eigen::Index stride = 1;
    for (std::size_t k = modes_; k > m + 1; --k) {
        stride *= truncation_;
    }
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (Eigen::Index s = 0; s < dim_; ++s) {
        const int n = digit(s, m + 1);
        if (n > 0) {
            op(s - stride, s) = std::sqrt(static_cast<double>(n));
        }
    }
    return op;
}

Eigen::MatrixXcd build_hamiltonian(const ModeBasis &basis, double delta_q, const FockSpace &space) {
    if (basis.size() != space.modes()) {
        throw InvalidInput("basis size does not match the Fock space");
    }
    const auto det = basis.detunings();
    const Eigen::MatrixXcd a = space.qubit_lowering();
    Eigen::MatrixXcd h = delta_q * (a.adjoint() * a);
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const Eigen::MatrixXcd b = space.mode_lowering(m);
        const Eigen::MatrixXcd ab = a.adjoint() * b;
        h += det[m] * (b.adjoint() * b) + basis.modes[m].g * (ab + ab.adjoint());
    }
    return h;
}

} // namespace pqed
