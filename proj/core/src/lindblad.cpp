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

#include "pqed/lindblad.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pqed/errors.hpp"

namespace pqed {

void LindbladConfig::validate() const {
    if (basis.modes.empty()) {
        throw InvalidInput("lindblad: mode basis is empty");
    }
    qubit.validate();
    if (phonon_t1s.size() != basis.size()) {
        throw InvalidInput("lindblad: phonon_t1s must have one entry per mode");
    }
    for (double t1 : phonon_t1s) {
        if (!(t1 > 0.0)) {
            throw InvalidInput("lindblad: phonon lifetimes must be positive");
        }
    }
    if (fock_truncation < 2) {
        throw InvalidInput("lindblad: fock_truncation must be >= 2");
    }
    if (time_grid.empty()) {
        throw InvalidInput("lindblad: time grid is empty");
    }
}

double LindbladResult::excitation_number(std::size_t k) const {
    return qubit_population[k] + mode_populations.row(static_cast<Eigen::Index>(k)).sum();
}

LindbladResult lindblad_evolve(const LindbladConfig &cfg, const ProductState &initial) {
    cfg.validate();
    const FockSpace space(cfg.basis.size(), cfg.fock_truncation, cfg.dimension_cap);
    const Eigen::Index dim = space.dimension();
    using Complex = std::complex<double>;
    const Complex I(0.0, 1.0);

    std::vector<int> occ = initial.occupations;
    if (occ.empty()) {
        occ.assign(cfg.basis.size(), 0);
    }
    const Eigen::Index start = space.index(initial.qubit, occ);

    const Eigen::MatrixXcd a = space.qubit_lowering();
    std::vector<Eigen::MatrixXcd> collapse;
    if (!std::isinf(cfg.qubit.t1_qubit)) {
        collapse.push_back(std::sqrt(1.0 / cfg.qubit.t1_qubit) * a);
    }
    std::vector<Eigen::MatrixXcd> numbers;
    for (std::size_t m = 0; m < cfg.basis.size(); ++m) {
        const Eigen::MatrixXcd b = space.mode_lowering(m);
        numbers.push_back(b.adjoint() * b);
        if (!std::isinf(cfg.phonon_t1s[m])) {
            collapse.push_back(std::sqrt(1.0 / cfg.phonon_t1s[m]) * b);
        }
    }
    const Eigen::MatrixXcd qubit_number = a.adjoint() * a;

    Eigen::MatrixXcd heff = build_hamiltonian(cfg.basis, cfg.qubit.detuning_delta_q, space);
    for (const auto &l : collapse) {
        heff -= 0.5 * I * (l.adjoint() * l);
    }
    const Eigen::MatrixXcd minus_i_heff = -I * heff;

    auto rhs = [&](double, const Eigen::VectorXcd &y, Eigen::VectorXcd &dy) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
        Eigen::Map<Eigen::MatrixXcd> drho(dy.data(), dim, dim);
        drho.noalias() = minus_i_heff * rho;
        drho += drho.adjoint().eval();
        for (const auto &l : collapse) {
            drho.noalias() += l * rho * l.adjoint();
        }
    };

    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(dim * dim);
    y0[start * dim + start] = 1.0;

    LindbladResult res;
    const auto nt = static_cast<Eigen::Index>(cfg.time_grid.size());
    res.mode_populations.resize(nt, static_cast<Eigen::Index>(cfg.basis.size()));
    ode::Options o;
    o.tol = cfg.tol;
    ode::DormandPrince<Eigen::VectorXcd> solver(o);
    solver.integrate(rhs, 0.0, y0, cfg.time_grid, [&](double t, const Eigen::VectorXcd &y) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
        const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
        const double min_ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(
                                  herm, Eigen::EigenvaluesOnly)
                                  .eigenvalues()
                                  .minCoeff();
        if (min_ev < -cfg.positivity_tolerance) {
            std::ostringstream msg;
            msg << "lindblad: density matrix lost positivity at t = " << t
                << " (min eigenvalue " << min_ev << ")";
            throw NumericalError(msg.str());
        }
        const auto k = static_cast<Eigen::Index>(res.time.size());
        res.time.push_back(t);
        res.trace.push_back(rho.trace().real());
        res.min_eigenvalue.push_back(min_ev);
        res.qubit_population.push_back((qubit_number * rho).trace().real());
        for (std::size_t m = 0; m < numbers.size(); ++m) {
            res.mode_populations(k, static_cast<Eigen::Index>(m)) =
                (numbers[m] * rho).trace().real();
        }
    });
    return res;
}

} // namespace pqed
