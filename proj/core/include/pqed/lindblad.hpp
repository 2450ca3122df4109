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

#include <vector>

#include <Eigen/Dense>

#include "pqed/hamiltonian.hpp"
#include "pqed/modes.hpp"
#include "pqed/ode.hpp"

namespace pqed {

struct LindbladConfig {
    ModeBasis basis;
    QubitParams qubit;
    std::vector<double> phonon_t1s; ///< one per mode; inf = lossless
    int fock_truncation = 2;
    std::vector<double> time_grid;
    std::size_t dimension_cap = kDefaultDimensionCap;
    ode::Tolerances tol{};
    double positivity_tolerance = 1e-8;

    void validate() const;
};

/// Ground or excited qubit times Fock states of each mode.
struct ProductState {
    int qubit = 1;
    std::vector<int> occupations; ///< empty means all modes in vacuum
};

struct LindbladResult {
    std::vector<double> time;
    std::vector<double> qubit_population;
    Eigen::MatrixXd mode_populations; ///< rows = time, cols = mode, <b^+ b>
    std::vector<double> trace;
    std::vector<double> min_eigenvalue;

    /// <a^+ a> + sum_m <b_m^+ b_m> at sample k.
    double excitation_number(std::size_t k) const;
};

/// Integrates d rho/dt = -i (H_eff rho - rho H_eff^+) + sum_k L_k rho L_k^+
/// with H_eff = H - (i/2) sum_k L_k^+ L_k and collapse operators
/// sqrt(1/T1) a and sqrt(1/T1_m) b_m. Throws NumericalError when the state
/// loses positivity beyond cfg.positivity_tolerance.
LindbladResult lindblad_evolve(const LindbladConfig &cfg, const ProductState &initial = {});

} // namespace pqed
