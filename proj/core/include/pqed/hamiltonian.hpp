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

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "pqed/modes.hpp"

namespace pqed {

struct QubitParams {
    /// Energy relaxation time; infinity disables qubit decay.
    double t1_qubit = std::numeric_limits<double>::infinity();
    double detuning_delta_q = 0.0; ///< rad/s, relative to omega_{l,0}

    /// Amplitude decay rate 1/(2 T1), so the population decays as exp(-t/T1).
    double gamma() const;
    void validate() const;
};

/// Amplitude damping rate 1/(2 T1) for a lifetime that may be infinite.
double amplitude_rate(double t1);

/// (M+1) x (M+1) block of the multimode Jaynes-Cummings Hamiltonian on the
/// single-excitation manifold, index 0 = qubit, 1 + m = mode m.
Eigen::MatrixXd single_excitation_hamiltonian(const ModeBasis &basis, double delta_q);

inline constexpr std::size_t kDefaultDimensionCap = 1024;

/// Truncated product space: qubit (2 levels) followed by M modes with
/// `truncation` Fock levels each. The qubit is the most significant factor.
class FockSpace {
  public:
    FockSpace(std::size_t modes, int truncation, std::size_t dimension_cap = kDefaultDimensionCap);

    std::size_t modes() const { return modes_; }
    int truncation() const { return truncation_; }
    Eigen::Index dimension() const { return dim_; }

    /// Basis index of |qubit, n_0, ..., n_{M-1}>.
    Eigen::Index index(int qubit, const std::vector<int> &occupations) const;

    Eigen::MatrixXcd qubit_lowering() const;
    Eigen::MatrixXcd mode_lowering(std::size_t m) const;

  private:
    int digit(Eigen::Index state, std::size_t factor) const;

    std::size_t modes_;
    int truncation_;
    Eigen::Index dim_;
};

/// H = dq a^+ a + sum_m delta_m b_m^+ b_m + g_m (a^+ b_m + a b_m^+) on the
/// truncated space.
Eigen::MatrixXcd build_hamiltonian(const ModeBasis &basis, double delta_q, const FockSpace &space);

} // namespace pqed
