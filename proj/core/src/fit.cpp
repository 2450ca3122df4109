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

#include "pqed/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Dense>

#include "pqed/csv.hpp"
#include "pqed/errors.hpp"
#include "pqed/levenberg_marquardt.hpp"
#include "pqed/modes.hpp"

namespace pqed {

namespace {

void check_signal(const DecaySignal &s) {
    if (s.t_axis.size() != s.value.size()) {
        throw InvalidInput("fit: time and value lengths differ");
    }
    if (s.t_axis.size() < 8) {
        throw InvalidInput("fit: need at least 8 samples");
    }
    for (std::size_t i = 1; i < s.t_axis.size(); ++i) {
        if (!(s.t_axis[i] > s.t_axis[i - 1])) {
            throw InvalidInput("fit: time axis must be strictly increasing");
        }
    }
    for (double v : s.value) {
        if (!std::isfinite(v)) {
            throw InvalidInput("fit: signal contains non-finite values");
        }
    }
}

// Indices of time-like and frequency-like parameters, for unit scaling.
bool is_time_param(FitModel m, std::size_t k) {
    switch (m) {
    case FitModel::Exp:
        return k == 1;
    case FitModel::ExpPlusDecayingSine:
        return k == 1 || k == 3;
    case FitModel::DecayingSine:
        return k == 1;
    }
    return false;
}

bool is_freq_param(FitModel m, std::size_t k) {
    return (m == FitModel::ExpPlusDecayingSine && k == 4) ||
           (m == FitModel::DecayingSine && k == 2);
}

// Least-squares A, offset for y ~ A exp(-u/T) + offset.
std::pair<double, double> linear_amplitude(const std::vector<double> &u,
                                           const std::vector<double> &y, double T) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(u.size()), 2);
    Eigen::VectorXd Y(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        X(k, 0) = std::exp(-u[i] / T);
        X(k, 1) = 1.0;
        Y[k] = y[i];
    }
    const Eigen::Vector2d c = X.colPivHouseholderQr().solve(Y);
    return {c[0], c[1]};
}

// Weighted least-squares line through (x, y); returns (slope, intercept).
std::pair<double, double> weighted_line(const std::vector<double> &x, const std::vector<double> &y,
                                        const std::vector<double> &w) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double den = sw * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) {
        return {0.0, sw > 0 ? sy / sw : 0.0};
    }
    const double slope = (sw * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / sw};
}

// Guesses in scaled time units (u = t / t_scale).
std::vector<double> guess_exp(const std::vector<double> &u, const std::vector<double> &y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = std::max(*hi - *lo, 1e-300);
    const double base = *lo - 0.01 * range;
    std::vector<double> ly(y.size()), w(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double z = y[i] - base;
        ly[i] = std::log(z);
        w[i] = z * z;
    }
    const double span = u.back() - u.front();
    auto [slope, intercept] = weighted_line(u, ly, w);
    (void)intercept;
    double T = slope < 0 ? -1.0 / slope : 10.0 * span;
    T = std::clamp(T, 1e-3 * span, 1e3 * span);
    // A decreasing signal gets A > 0 from the linear solve; a rising one A < 0.
    const auto [A, c] = linear_amplitude(u, y, T);
    return {A, T, c};
}

struct SineGuess {
    double amplitude, decay, freq, phase;
};

SineGuess guess_sine(const std::vector<double> &u, const std::vector<double> &z) {
    const std::size_t n = u.size();
    const double span = u.back() - u.front();
    const double du = span / static_cast<double>(n - 1);
    const double nyquist = 0.5 / du;
    using Complex = std::complex<double>;
    auto dft = [&](double f) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += z[i] * std::polar(1.0, -kTwoPi * f * u[i]);
        }
        return acc;
    };
    const double df = 0.05 / span;
    double best_f = 1.0 / span;
    double best_p = -1.0;
    for (double f = 0.5 / span; f <= nyquist; f += df) {
        const double p = std::norm(dft(f));
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }
    // golden-section refinement inside the neighbouring bins
    double a = std::max(best_f - df, 0.0), b = best_f + df;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double pc = std::norm(dft(c)), pd = std::norm(dft(d));
    for (int it = 0; it < 60; ++it) {
        if (pc > pd) {
            b = d;
            d = c;
            pd = pc;
            c = b - gr * (b - a);
            pc = std::norm(dft(c));
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + gr * (b - a);
            pd = std::norm(dft(d));
        }
    }
    const double f = 0.5 * (a + b);
    const Complex Z = dft(f);
    const double phase = std::arg(Z);

    // envelope decay from segment RMS
    const std::size_t segments = std::min<std::size_t>(4, n / 4);
    std::vector<double> xs, ls, ws;
    for (std::size_t s = 0; s < segments; ++s) {
        const std::size_t i0 = s * n / segments, i1 = (s + 1) * n / segments;
        double acc = 0, tc = 0;
        for (std::size_t i = i0; i < i1; ++i) {
            acc += z[i] * z[i];
            tc += u[i];
        }
        const double rms = std::sqrt(acc / static_cast<double>(i1 - i0));
        if (rms > 0) {
            xs.push_back(tc / static_cast<double>(i1 - i0));
            ls.push_back(std::log(rms));
            ws.push_back(1.0);
        }
    }
    double decay = 10.0 * span;
    double amplitude = 2.0 * std::abs(Z) / static_cast<double>(n);
    if (xs.size() >= 2) {
        const auto [slope, intercept] = weighted_line(xs, ls, ws);
        if (slope < 0) {
            decay = std::clamp(-1.0 / slope, 1e-2 * span, 1e3 * span);
            amplitude = std::sqrt(2.0) * std::exp(intercept);
        }
    }
    return {amplitude, decay, f, phase};
}

std::vector<double> guess_scaled(FitModel model, const std::vector<double> &u,
                                 const std::vector<double> &y) {
    switch (model) {
    case FitModel::Exp:
        return guess_exp(u, y);
    case FitModel::DecayingSine: {
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        std::vector<double> z(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            z[i] = y[i] - mean;
        }
        const auto s = guess_sine(u, z);
        return {s.amplitude, s.decay, s.freq, s.phase, mean};
    }
    case FitModel::ExpPlusDecayingSine: {
        auto e = guess_exp(u, y);
        // polish the exponential before looking at the beat in its residual
        lm::ResidualFn fn = [&](const Eigen::VectorXd &p, Eigen::VectorXd &r, Eigen::MatrixXd *J) {
            const auto n = static_cast<Eigen::Index>(u.size());
            r.resize(n);
            if (J) {
                J->resize(n, 3);
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                const double t = u[static_cast<std::size_t>(i)];
                const double ex = std::exp(-t / p[1]);
                r[i] = p[0] * ex + p[2] - y[static_cast<std::size_t>(i)];
                if (J) {
                    (*J)(i, 0) = ex;
                    (*J)(i, 1) = p[0] * ex * t / (p[1] * p[1]);
                    (*J)(i, 2) = 1.0;
                }
            }
        };
        const auto r = lm::minimize(fn, Eigen::Map<Eigen::VectorXd>(e.data(), 3));
        if (r.params.allFinite() && r.params[1] > 0) {
            e = {r.params[0], r.params[1], r.params[2]};
        }
        std::vector<double> z(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            z[i] = y[i] - (e[0] * std::exp(-u[i] / e[1]) + e[2]);
        }
        const auto s = guess_sine(u, z);
        return {e[0], e[1], s.amplitude, s.decay, s.freq, s.phase, e[2]};
    }
    }
    return {};
}

double model_scaled(FitModel m, const double *p, double u, double *grad) {
    switch (m) {
    case FitModel::Exp: {
        const double ex = std::exp(-u / p[1]);
        if (grad) {
            grad[0] = ex;
            grad[1] = p[0] * ex * u / (p[1] * p[1]);
            grad[2] = 1.0;
        }
        return p[0] * ex + p[2];
    }
    case FitModel::ExpPlusDecayingSine: {
        const double ex = std::exp(-u / p[1]);
        const double eb = std::exp(-u / p[3]);
        const double th = kTwoPi * p[4] * u + p[5];
        const double c = std::cos(th), s = std::sin(th);
        if (grad) {
            grad[0] = ex;
            grad[1] = p[0] * ex * u / (p[1] * p[1]);
            grad[2] = eb * c;
            grad[3] = p[2] * eb * c * u / (p[3] * p[3]);
            grad[4] = -p[2] * eb * s * kTwoPi * u;
            grad[5] = -p[2] * eb * s;
            grad[6] = 1.0;
        }
        return p[0] * ex + p[2] * eb * c + p[6];
    }
    case FitModel::DecayingSine: {
        const double ex = std::exp(-u / p[1]);
        const double th = kTwoPi * p[2] * u + p[3];
        const double c = std::cos(th), s = std::sin(th);
        if (grad) {
            grad[0] = ex * c;
            grad[1] = p[0] * ex * c * u / (p[1] * p[1]);
            grad[2] = -p[0] * ex * s * kTwoPi * u;
            grad[3] = -p[0] * ex * s;
            grad[4] = 1.0;
        }
        return p[0] * ex * c + p[4];
    }
    }
    return 0.0;
}

std::vector<double> to_scaled(FitModel m, std::vector<double> p, double ts) {
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (is_time_param(m, k)) {
            p[k] /= ts;
        } else if (is_freq_param(m, k)) {
            p[k] *= ts;
        }
    }
    return p;
}

std::vector<double> from_scaled(FitModel m, std::vector<double> p, double ts) {
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (is_time_param(m, k)) {
            p[k] *= ts;
        } else if (is_freq_param(m, k)) {
            p[k] /= ts;
        }
    }
    return p;
}

double time_scale(const DecaySignal &s) {
    const double ts = std::max(std::abs(s.t_axis.front()), std::abs(s.t_axis.back()));
    return ts > 0 ? ts : 1.0;
}

} // namespace

const char *to_string(FitModel m) {
    switch (m) {
    case FitModel::Exp:
        return "exp";
    case FitModel::ExpPlusDecayingSine:
        return "exp+decaying-sine";
    case FitModel::DecayingSine:
        return "decaying-sine";
    }
    return "?";
}

FitModel fit_model_from_string(const std::string &s) {
    if (s == "exp") {
        return FitModel::Exp;
    }
    if (s == "exp+decaying-sine") {
        return FitModel::ExpPlusDecayingSine;
    }
    if (s == "decaying-sine") {
        return FitModel::DecayingSine;
    }
    throw InvalidInput("unknown fit model '" + s +
                       "' (expected exp, exp+decaying-sine or decaying-sine)");
}

std::vector<std::string> parameter_names(FitModel m) {
    switch (m) {
    case FitModel::Exp:
        return {"A", "T1", "offset"};
    case FitModel::ExpPlusDecayingSine:
        return {"A", "T1", "B", "tau_beat", "f_beat", "phase", "offset"};
    case FitModel::DecayingSine:
        return {"A", "T2", "f_beat", "phase", "offset"};
    }
    return {};
}

double evaluate_model(FitModel m, std::span<const double> params, double t) {
    if (params.size() != parameter_names(m).size()) {
        throw InvalidInput("evaluate_model: wrong number of parameters");
    }
    return model_scaled(m, params.data(), t, nullptr);
}

double FitResult::get(std::string_view name) const {
    for (const auto &p : params) {
        if (p.name == name) {
            return p.value;
        }
    }
    throw InvalidInput("fit result has no parameter '" + std::string(name) + "'");
}

double FitResult::error(std::string_view name) const {
    for (const auto &p : params) {
        if (p.name == name) {
            return p.uncertainty;
        }
    }
    throw InvalidInput("fit result has no parameter '" + std::string(name) + "'");
}

std::vector<double> FitResult::values() const {
    std::vector<double> v;
    for (const auto &p : params) {
        v.push_back(p.value);
    }
    return v;
}

std::vector<double> initial_guess(const DecaySignal &signal, FitModel model) {
    check_signal(signal);
    const double ts = time_scale(signal);
    std::vector<double> u(signal.t_axis.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = signal.t_axis[i] / ts;
    }
    return from_scaled(model, guess_scaled(model, u, signal.value), ts);
}

FitResult fit_decay(const DecaySignal &signal, FitModel model,
                    const std::optional<std::vector<double>> &guess, const FitOptions &opts) {
    check_signal(signal);
    const auto names = parameter_names(model);
    const std::size_t np = names.size();
    if (guess && guess->size() != np) {
        throw InvalidInput("fit: initial guess has the wrong number of parameters");
    }
    const double ts = time_scale(signal);
    std::vector<double> u(signal.t_axis.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = signal.t_axis[i] / ts;
    }
    const std::vector<double> p0 =
        guess ? to_scaled(model, *guess, ts) : guess_scaled(model, u, signal.value);

    const auto n = static_cast<Eigen::Index>(u.size());
    std::vector<double> grad(np);
    lm::ResidualFn fn = [&](const Eigen::VectorXd &p, Eigen::VectorXd &r, Eigen::MatrixXd *J) {
        r.resize(n);
        if (J) {
            J->resize(n, static_cast<Eigen::Index>(np));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            r[i] = model_scaled(model, p.data(), u[ui], J ? grad.data() : nullptr) -
                   signal.value[ui];
            if (J) {
                for (std::size_t k = 0; k < np; ++k) {
                    (*J)(i, static_cast<Eigen::Index>(k)) = grad[k];
                }
            }
        }
    };
    lm::Options lo;
    lo.max_iterations = opts.max_iterations;
    Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(p0.data(), static_cast<Eigen::Index>(np));
    const auto res = lm::minimize(fn, start, lo);

    FitResult out;
    out.model = model;
    out.iterations = res.iterations;
    out.converged = res.converged;
    out.message = res.message;
    std::vector<double> pv(res.params.data(), res.params.data() + np);
    std::vector<double> ev(res.stderrs.data(), res.stderrs.data() + np);
    pv = from_scaled(model, pv, ts);
    for (std::size_t k = 0; k < np; ++k) {
        if (is_time_param(model, k)) {
            ev[k] *= ts;
        } else if (is_freq_param(model, k)) {
            ev[k] /= ts;
        }
        out.params.push_back({names[k], pv[k], ev[k]});
    }
    out.residual_rms = std::sqrt(res.residuals.squaredNorm() / static_cast<double>(n));
    for (std::size_t k = 0; k < np; ++k) {
        if (is_time_param(model, k) && !(pv[k] > 0.0)) {
            out.converged = false;
            out.message = "decay time " + names[k] + " is not positive";
        }
        if (!std::isfinite(pv[k])) {
            out.converged = false;
            out.message = "non-finite parameter " + names[k];
        }
    }
    if (!std::isfinite(out.residual_rms)) {
        out.converged = false;
    }
    return out;
}

std::string format_decay_csv(const DecaySignal &signal) {
    std::string out = "tau_s,value\n";
    for (std::size_t i = 0; i < signal.t_axis.size(); ++i) {
        out += io::format_shortest(signal.t_axis[i]) + ',' + io::format_shortest(signal.value[i]) +
               '\n';
    }
    return out;
}

DecaySignal parse_decay_csv(std::string_view text, SignalKind kind) {
    DecaySignal s;
    s.kind = kind;
    bool header = true;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            if (line != "tau_s,value") {
                throw IoError("decay csv: expected header 'tau_s,value'");
            }
            header = false;
            continue;
        }
        const auto cells = io::split_csv_line(line);
        if (cells.size() != 2) {
            throw IoError("decay csv: expected two columns");
        }
        s.t_axis.push_back(io::parse_double(cells[0]));
        s.value.push_back(io::parse_double(cells[1]));
    }
    return s;
}

std::string format_fit_csv(const FitResult &fit) {
    std::string out = "model,param,value,stderr\n";
    for (const auto &p : fit.params) {
        out += std::string(to_string(fit.model)) + ',' + p.name + ',' +
               io::format_shortest(p.value) + ',' + io::format_shortest(p.uncertainty) + '\n';
    }
    out += std::string(to_string(fit.model)) + ",residual_rms," +
           io::format_shortest(fit.residual_rms) + ",0\n";
    out += std::string(to_string(fit.model)) + ",converged," + (fit.converged ? "1" : "0") +
           ",0\n";
    return out;
}

} // namespace pqed
