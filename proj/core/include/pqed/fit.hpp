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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqed {

enum class SignalKind { T1, T2, RabiAmplitudeSweep };

struct DecaySignal {
    std::vector<double> t_axis; ///< s
    std::vector<double> value;
    SignalKind kind = SignalKind::T1;
};

/// `tau_s,value` with shortest round-trip numbers.
std::string format_decay_csv(const DecaySignal &signal);
DecaySignal parse_decay_csv(std::string_view text, SignalKind kind = SignalKind::T1);

enum class FitModel {
    Exp,                 ///< A exp(-t/T1) + offset
    ExpPlusDecayingSine, ///< A exp(-t/T1) + B exp(-t/tau_beat) cos(2 pi f_beat t + phase) + offset
    DecayingSine,        ///< A exp(-t/T2) cos(2 pi f_beat t + phase) + offset
};

const char *to_string(FitModel m);
FitModel fit_model_from_string(const std::string &s);

/// Parameter names in the order used by evaluate_model and initial guesses.
std::vector<std::string> parameter_names(FitModel m);

double evaluate_model(FitModel m, std::span<const double> params, double t);

struct FitParam {
    std::string name;
    double value = 0.0;
    double uncertainty = 0.0; ///< one standard error
};

struct FitResult {
    FitModel model = FitModel::Exp;
    std::vector<FitParam> params;
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string message;

    /// Value of the named parameter; throws InvalidInput if absent.
    double get(std::string_view name) const;
    double error(std::string_view name) const;
    std::vector<double> values() const;
};

struct FitOptions {
    int max_iterations = 500;
};

/// Deterministic Levenberg-Marquardt fit. Without an initial guess, decay
/// times come from a log-linear fit and beat frequencies from the
/// periodogram peak. Requires >= 8 samples on a strictly increasing axis.
FitResult fit_decay(const DecaySignal &signal, FitModel model,
                    const std::optional<std::vector<double>> &initial_guess = std::nullopt,
                    const FitOptions &opts = {});

/// Automatic starting point used by fit_decay.
std::vector<double> initial_guess(const DecaySignal &signal, FitModel model);

/// `model,param,value,stderr`
std::string format_fit_csv(const FitResult &fit);

} // namespace pqed
