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

#include "pqed/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqed::special {
namespace {

constexpr double kAsymptoticThreshold = 25.0;

struct J01 {
    double j0;
    double j1;
};

// Ascending series; used for |x| < 1 where no cancellation occurs.
J01 power_series(double x) {
    const double q = -0.25 * x * x;
    double t0 = 1.0, s0 = 1.0;
    double t1 = 0.5 * x, s1 = t1;
    for (int k = 1; k < 40; ++k) {
        t0 *= q / (static_cast<double>(k) * k);
        t1 *= q / (static_cast<double>(k) * (k + 1));
        s0 += t0;
        s1 += t1;
        if (std::abs(t0) < 1e-18 * std::abs(s0) && std::abs(t1) < 1e-18 * std::abs(s1)) {
            break;
        }
    }
    return {s0, s1};
}

// Miller's backward recurrence normalized by J0 + 2 * sum J_{2k} = 1.
J01 miller(double x) {
    const double ax = std::abs(x);
    int start = static_cast<int>(ax) + 50;
    if (start % 2 != 0) {
        ++start;
    }
    double next = 0.0;  // J_{k+1}
    double cur = 1e-30; // J_k
    double even_sum = 0.0;
    double j1 = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = 2.0 * k / ax * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
            j1 *= 1e-250;
        }
        const int order = k - 1;
        if (order == 1) {
            j1 = cur;
        }
        if (order > 0 && order % 2 == 0) {
            even_sum += cur;
        }
    }
    const double norm = cur + 2.0 * even_sum;
    J01 r{cur / norm, j1 / norm};
    if (x < 0.0) {
        r.j1 = -r.j1;
    }
    return r;
}

// Hankel expansion P_nu, Q_nu for nu = 0, 1.
void hankel_pq(int nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double last = 1e300;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(term) > last) {
            break; // asymptotic series started to diverge
        }
        last = std::abs(term);
        // terms alternate between Q (odd k) and P (even k) with sign (-1)^floor(k/2)
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1) {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if (last < 1e-17) {
            break;
        }
    }
}

J01 asymptotic(double x) {
    const double ax = std::abs(x);
    const double amp = std::sqrt(2.0 / (std::numbers::pi * ax));
    const double c = std::cos(ax);
    const double s = std::sin(ax);
    constexpr double r2 = std::numbers::sqrt2 / 2.0;

    double p0, q0, p1, q1;
    hankel_pq(0, ax, p0, q0);
    hankel_pq(1, ax, p1, q1);

    // chi0 = x - pi/4, chi1 = x - 3pi/4
    const double cos0 = r2 * (c + s), sin0 = r2 * (s - c);
    const double cos1 = r2 * (s - c), sin1 = -r2 * (s + c);

    J01 r{amp * (p0 * cos0 - q0 * sin0), amp * (p1 * cos1 - q1 * sin1)};
    if (x < 0.0) {
        r.j1 = -r.j1;
    }
    return r;
}

J01 evaluate(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("bessel: non-finite argument");
    }
    const double ax = std::abs(x);
    if (ax < 1.0) {
        return power_series(x);
    }
    if (ax < kAsymptoticThreshold) {
        return miller(x);
    }
    return asymptotic(x);
}

} // namespace

double bessel_j0(double x) { return evaluate(x).j0; }

double bessel_j1(double x) { return evaluate(x).j1; }

double bessel_j0_root(int m) {
    if (m < 0) {
        throw std::domain_error("bessel_j0_root: negative index");
    }
    // McMahon expansion
    const double beta = (m + 0.75) * std::numbers::pi;
    const double b8 = 8.0 * beta;
    double root = beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8);
    for (int it = 0; it < 30; ++it) {
        const J01 v = evaluate(root);
        const double step = v.j0 / v.j1; // J0' = -J1
        root += step;
        if (std::abs(step) < 1e-15 * root) {
            break;
        }
    }
    return root;
}

} // namespace pqed::special
