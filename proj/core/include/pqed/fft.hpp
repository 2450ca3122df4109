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

#include <complex>
#include <cstddef>
#include <memory>
#include <string>

namespace pqed {

enum class FftPlanner {
    Estimate, ///< heuristic plans, reproducible run to run
    Measure,  ///< timed plans; faster, may differ in the last bits between runs
};

const char *to_string(FftPlanner p);
FftPlanner fft_planner_from_string(const std::string &s);

/// In-place 2D complex transform of an nx x ny row-major buffer owned by the
/// object. Forward is exp(-i k x), inverse is unnormalized. Plan creation is
/// serialized internally; transforms on distinct objects may run concurrently.
class Fft2d {
  public:
    Fft2d(std::size_t nx, std::size_t ny, FftPlanner planner = FftPlanner::Estimate);
    ~Fft2d();
    Fft2d(const Fft2d &) = delete;
    Fft2d &operator=(const Fft2d &) = delete;

    std::complex<double> *data();
    const std::complex<double> *data() const;
    std::size_t size() const { return nx_ * ny_; }

    void forward();
    void inverse();

  private:
    struct Impl;
    std::size_t nx_, ny_;
    std::unique_ptr<Impl> impl_;
};

} // namespace pqed
