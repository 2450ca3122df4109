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

// Dormand-Prince 5(4) embedded Runge-Kutta integrator with FSAL and the
// 4th-order continuous extension (Hairer, Norsett & Wanner, "Solving ODEs I").

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>

#include <Eigen/Dense>

#include "pqed/errors.hpp"

namespace pqed::ode {

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
};

struct Options {
    Tolerances tol{};
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0; // 0 selects the step automatically
    long max_steps = 50'000'000;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

namespace detail {

// Butcher tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// error coefficients (5th minus 4th order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

} // namespace detail

/// Adaptive integrator over an Eigen column-vector state (real or complex).
///
/// `integrate` advances from `t0` through every time in `outputs` (sorted,
/// all >= t0) and calls `observer(t, y)` for each of them using the
/// continuous extension, so output density does not constrain the step.
template <class Vector>
class DormandPrince {
  public:
    using Rhs = std::function<void(double, const Vector &, Vector &)>;
    using Observer = std::function<void(double, const Vector &)>;

    explicit DormandPrince(Options opts = {}) : opts_(opts) {}

    Stats integrate(const Rhs &f, double t0, Vector y, std::span<const double> outputs,
                    const Observer &observer) const {
        using namespace detail;
        Stats stats;
        if (outputs.empty()) {
            return stats;
        }
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            if (outputs[i] < t0 || (i > 0 && outputs[i] < outputs[i - 1])) {
                throw InvalidInput("ode: output times must be sorted and >= t0");
            }
        }

        const Eigen::Index n = y.size();
        Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n);
        Vector r1(n), r2(n), r3(n), r4(n), r5(n);

        std::size_t next = 0;
        while (next < outputs.size() && outputs[next] == t0) {
            observer(t0, y);
            ++next;
        }
        if (next == outputs.size()) {
            return stats;
        }
        const double t_end = outputs.back();

        double t = t0;
        f(t, y, k1);
        ++stats.evaluations;
        double h = opts_.initial_step > 0 ? opts_.initial_step : initial_step(f, t, y, k1, stats);
        h = std::min(h, opts_.max_step);

        while (next < outputs.size()) {
            if (stats.accepted + stats.rejected > opts_.max_steps) {
                throw NumericalError("ode: maximum number of steps exceeded");
            }
            const double h_min = 16.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(t), std::abs(t_end - t0));
            if (t + 1.01 * h >= t_end) {
                h = t_end - t;
            }
            if (h < h_min) {
                std::ostringstream msg;
                msg << "ode: step-size underflow at t = " << t << " (h = " << h << ")";
                throw NumericalError(msg.str());
            }

            tmp = y + h * a21 * k1;
            f(t + c2 * h, tmp, k2);
            tmp = y + h * (a31 * k1 + a32 * k2);
            f(t + c3 * h, tmp, k3);
            tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * h, tmp, k4);
            tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * h, tmp, k5);
            tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + h, tmp, k6);
            y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            f(t + h, y1, k7);
            stats.evaluations += 6;

            tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double sk = opts_.tol.atol +
                                  opts_.tol.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
                const double e = std::abs(tmp[i]) / sk;
                err += e * e;
            }
            err = std::sqrt(err / static_cast<double>(std::max<Eigen::Index>(n, 1)));

            if (!std::isfinite(err)) {
                h *= 0.1;
                ++stats.rejected;
                continue;
            }

            if (err <= 1.0) {
                ++stats.accepted;
                const double t_new = (h == t_end - t) ? t_end : t + h;
                if (next < outputs.size() && outputs[next] <= t_new) {
                    // continuous extension coefficients
                    r1 = y;
                    r2 = y1 - y;
                    r3 = h * k1 - r2;
                    r4 = r2 - h * k7 - r3;
                    r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                    while (next < outputs.size() && outputs[next] <= t_new) {
                        const double to = outputs[next];
                        if (to == t_new) {
                            observer(to, y1);
                        } else {
                            const double th = (to - t) / h;
                            const double th1 = 1.0 - th;
                            tmp = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
                            observer(to, tmp);
                        }
                        ++next;
                    }
                }
                t = t_new;
                y.swap(y1);
                k1.swap(k7); // FSAL
                const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                h = std::min(h * fac, opts_.max_step);
            } else {
                ++stats.rejected;
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            }
        }
        return stats;
    }

  private:
    double initial_step(const Rhs &f, double t, const Vector &y, const Vector &dy,
                        Stats &stats) const {
        const Eigen::Index n = y.size();
        double d0 = 0, d1n = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sk = opts_.tol.atol + opts_.tol.rtol * std::abs(y[i]);
            d0 += std::pow(std::abs(y[i]) / sk, 2);
            d1n += std::pow(std::abs(dy[i]) / sk, 2);
        }
        d0 = std::sqrt(d0 / n);
        d1n = std::sqrt(d1n / n);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, opts_.max_step);
        Vector y1 = y + h0 * dy;
        Vector f1(n);
        f(t + h0, y1, f1);
        ++stats.evaluations;
        double d2 = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sk = opts_.tol.atol + opts_.tol.rtol * std::abs(y[i]);
            d2 += std::pow(std::abs(f1[i] - dy[i]) / sk, 2);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(d1n, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min(100.0 * h0, h1);
    }

    Options opts_;
};

} // namespace pqed::ode
