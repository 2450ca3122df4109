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

#include "pqed/levenberg_marquardt.hpp"

#include <cmath>
#include <limits>

namespace pqed::lm {

Result minimize(const ResidualFn &fn, Eigen::VectorXd p, const Options &opts) {
    const Eigen::Index np = p.size();
    Eigen::VectorXd r, r_try;
    Eigen::MatrixXd J;
    fn(p, r, &J);
    const Eigen::Index m = r.size();

    Result res;
    double cost = 0.5 * r.squaredNorm();
    double lambda = opts.initial_damping;
    double nu = 2.0;
    bool have_jacobian = true;

    Eigen::MatrixXd A;
    Eigen::VectorXd g;

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (!have_jacobian) {
            fn(p, r, &J);
            have_jacobian = true;
        }
        if (!J.allFinite() || !r.allFinite()) {
            res.message = "non-finite residual or Jacobian";
            break;
        }
        A = J.transpose() * J;
        g = J.transpose() * r;
        Eigen::VectorXd diag = A.diagonal();
        if ((diag.array() <= 0.0).any()) {
            res.message = "singular Jacobian (parameter with no influence)";
            break;
        }
        const double gscaled = (g.array().abs() / diag.array().sqrt()).maxCoeff() /
                               std::max(std::sqrt(2.0 * cost), 1e-300);
        if (gscaled < opts.gtol) {
            res.converged = true;
            res.message = "gradient tolerance reached";
            break;
        }

        Eigen::MatrixXd Ad = A;
        Ad.diagonal() += lambda * diag;
        const Eigen::VectorXd step = Ad.ldlt().solve(-g);
        if (!step.allFinite()) {
            res.message = "singular normal equations";
            break;
        }
        const Eigen::VectorXd p_try = p + step;
        fn(p_try, r_try, nullptr);
        const double cost_try = 0.5 * r_try.squaredNorm();
        // predicted reduction of the quadratic model
        const double predicted = -(step.dot(g) + 0.5 * step.dot(A * step));

        if (std::isfinite(cost_try) && cost_try < cost) {
            const double rho = predicted > 0 ? (cost - cost_try) / predicted : 1.0;
            const double rel_decrease = (cost - cost_try) / std::max(cost, 1e-300);
            const double rel_step = step.norm() / (p.norm() + opts.xtol);
            p = p_try;
            r = r_try;
            cost = cost_try;
            have_jacobian = false;
            lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            if (rel_step < opts.xtol) {
                res.converged = true;
                res.message = "parameter tolerance reached";
                ++it;
                break;
            }
            if (rel_decrease < opts.ftol) {
                res.converged = true;
                res.message = "cost tolerance reached";
                ++it;
                break;
            }
        } else {
            lambda *= nu;
            nu *= 2.0;
            if (lambda > 1e16) {
                // no descent direction left at machine precision: at a minimum
                res.converged = true;
                res.message = "damping saturated at local minimum";
                break;
            }
        }
    }
    if (it >= opts.max_iterations && res.message.empty()) {
        res.message = "maximum iterations reached";
    }

    if (!have_jacobian) {
        fn(p, r, &J);
    }
    res.params = p;
    res.residuals = r;
    res.cost = 0.5 * r.squaredNorm();
    res.iterations = it;

    res.stderrs = Eigen::VectorXd::Constant(np, std::numeric_limits<double>::quiet_NaN());
    if (m > np && J.allFinite()) {
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
        if (lu.isInvertible()) {
            const double s2 = r.squaredNorm() / static_cast<double>(m - np);
            const Eigen::MatrixXd cov = lu.inverse() * s2;
            for (Eigen::Index i = 0; i < np; ++i) {
                res.stderrs[i] = std::sqrt(std::max(cov(i, i), 0.0));
            }
        }
    }
    return res;
}

} // namespace pqed::lm
