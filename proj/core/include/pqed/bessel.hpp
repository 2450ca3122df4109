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

namespace pqed::special {

/// Bessel function of the first kind, order 0.
///
/// Miller backward recurrence for |x| < 25, Hankel asymptotic series above.
/// Absolute error below 1e-14 for |x| <= 1e4. Throws std::domain_error for
/// non-finite input.
double bessel_j0(double x);

/// Bessel function of the first kind, order 1. Same method and accuracy as
/// bessel_j0.
double bessel_j1(double x);

/// Positive root of J0 with zero-based index: m = 0 returns 2.40482...,
/// m = 1 returns 5.52007..., and so on. Newton-polished McMahon estimate,
/// accurate to ~1e-14.
double bessel_j0_root(int m);

} // namespace pqed::special
