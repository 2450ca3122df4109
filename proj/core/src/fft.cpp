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

#include "pqed/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "pqed/errors.hpp"

namespace pqed {

namespace {
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

const char *to_string(FftPlanner p) { return p == FftPlanner::Estimate ? "estimate" : "measure"; }

FftPlanner fft_planner_from_string(const std::string &s) {
    if (s == "estimate") {
        return FftPlanner::Estimate;
    }
    if (s == "measure") {
        return FftPlanner::Measure;
    }
    throw InvalidInput("unknown fft planner '" + s + "' (expected estimate or measure)");
}

struct Fft2d::Impl {
    fftw_complex *buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

Fft2d::Fft2d(std::size_t nx, std::size_t ny, FftPlanner planner)
    : nx_(nx), ny_(ny), impl_(std::make_unique<Impl>()) {
    if (nx == 0 || ny == 0) {
        throw InvalidInput("fft: empty grid");
    }
    impl_->buf = fftw_alloc_complex(nx * ny);
    if (!impl_->buf) {
        throw NumericalError("fft: allocation failed");
    }
    const unsigned flags = planner == FftPlanner::Estimate ? FFTW_ESTIMATE : FFTW_MEASURE;
    {
        std::lock_guard lock(planner_mutex());
        // MEASURE overwrites the buffer while planning; it is cleared below
        impl_->fwd = fftw_plan_dft_2d(static_cast<int>(nx), static_cast<int>(ny), impl_->buf,
                                      impl_->buf, FFTW_FORWARD, flags);
        impl_->inv = fftw_plan_dft_2d(static_cast<int>(nx), static_cast<int>(ny), impl_->buf,
                                      impl_->buf, FFTW_BACKWARD, flags);
    }
    if (!impl_->fwd || !impl_->inv) {
        throw NumericalError("fft: plan creation failed");
    }
    for (std::size_t i = 0; i < nx * ny; ++i) {
        impl_->buf[i][0] = 0.0;
        impl_->buf[i][1] = 0.0;
    }
}

Fft2d::~Fft2d() {
    std::lock_guard lock(planner_mutex());
    if (impl_->fwd) {
        fftw_destroy_plan(impl_->fwd);
    }
    if (impl_->inv) {
        fftw_destroy_plan(impl_->inv);
    }
    fftw_free(impl_->buf);
}

std::complex<double> *Fft2d::data() {
    return reinterpret_cast<std::complex<double> *>(impl_->buf);
}

const std::complex<double> *Fft2d::data() const {
    return reinterpret_cast<const std::complex<double> *>(impl_->buf);
}

void Fft2d::forward() { fftw_execute(impl_->fwd); }
void Fft2d::inverse() { fftw_execute(impl_->inv); }

} // namespace pqed
