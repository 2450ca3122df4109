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

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace pqed::lm {

/// Residual callback: fills r (size m) and, when J is non-null, the m x n
/// Jacobian dr/dp at parameters p.
using ResidualFn =
    std::function<void(const Eigen::VectorXd &p, Eigen::VectorXd &r, Eigen::MatrixXd *J)>;

struct Options {
    int max_iterations = 500;
    double xtol = 1e-13; ///< relative parameter step
    double ftol = 1e-15; ///< relative cost decrease
    double gtol = 1e-14; ///< scaled gradient
    double initial_damping = 1e-3;
};

struct Result {
    Eigen::VectorXd params;
    Eigen::VectorXd residuals;
    Eigen::VectorXd stderrs; ///< sqrt(diag(s^2 (J^T J)^-1)); NaN when singular
    double cost = 0.0;       ///< 0.5 * |r|^2
    int iterations = 0;
    bool converged = false;
    std::string message;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling and Nielsen's damping
/// update (a trust-region method in the damping parameterization).
Result minimize(const ResidualFn &fn, Eigen::VectorXd p0, const Options &opts = {});

} // namespace pqed::lm
