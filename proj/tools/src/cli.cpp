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

#include "pqed_tools/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pqed/coherence.hpp"
#include "pqed/csv.hpp"
#include "pqed/errors.hpp"
#include "pqed/parallel.hpp"
#include "pqed/rabi_map.hpp"
#include "pqed/resonance.hpp"
#include "pqed/spectroscopy.hpp"
#include "pqed/swap.hpp"
#include "pqed_tools/config.hpp"
#include "pqed_tools/manifest.hpp"

#ifndef PQED_VERSION
#define PQED_VERSION "0.0.0"
#endif

namespace pqed::tools {

namespace {

namespace fs = std::filesystem;

struct Globals {
    std::string config_path;
    std::string preset;
    std::string from_manifest;
    std::string output_dir;
    std::vector<std::string> sets;
    int threads = 0;
    bool dry_run = false;
};

struct Run {
    std::string subcommand;
    RunConfig cfg;
    int threads = 1;
    std::vector<FileDigest> inputs;
    std::vector<std::string> outputs;
    std::ostream *out = nullptr;

    fs::path path(const std::string &name) const { return fs::path(cfg.io.output_dir) / name; }

    void write(const std::string &name, const std::string &content) {
        const fs::path p = path(name);
        io::write_file_atomic(p, content);
        outputs.push_back(p.string());
        *out << "wrote " << p.string() << '\n';
    }
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    }
    return v;
}

std::vector<double> detuning_grid(const RunConfig &c) {
    auto v = linspace(c.dynamics.detuning_start_hz, c.dynamics.detuning_stop_hz,
                      c.dynamics.detuning_points);
    for (double &x : v) {
        x *= kTwoPi;
    }
    return v;
}

std::vector<double> time_grid(const RunConfig &c) {
    return linspace(0.0, c.dynamics.time_stop, c.dynamics.time_points);
}

RabiMapOptions rabi_options(const Run &r) {
    RabiMapOptions o;
    o.engine = r.cfg.dynamics.engine;
    o.phonon_t1s = r.cfg.phonon_t1s();
    o.fock_truncation = r.cfg.dynamics.fock_truncation;
    o.dimension_cap = static_cast<std::size_t>(r.cfg.dynamics.dimension_cap);
    o.threads = r.threads;
    o.tol = r.cfg.tolerances();
    return o;
}

SwapPulse resolve_swap(Run &r, const ModeBasis &basis) {
    const auto &p = r.cfg.protocols;
    SwapPulse swap;
    if (p.swap_duration > 0.0) {
        swap.delta_q_during = kTwoPi * p.swap_delta_q_hz;
        swap.duration = p.swap_duration;
    } else {
        auto o = rabi_options(r);
        o.engine = Engine::Amplitude;
        swap = calibrate_swap(basis, r.cfg.qubit_params(), detuning_grid(r.cfg), time_grid(r.cfg),
                              o);
    }
    swap.rise_time = p.rise_time;
    *r.out << "swap: delta_q = " << io::format_significant(swap.delta_q_during / kTwoPi, 9)
           << " Hz, duration = " << io::format_significant(swap.duration, 9) << " s\n";
    return swap;
}

CoherenceOptions coherence_options(const Run &r) {
    CoherenceOptions o;
    o.variant = r.cfg.protocols.t1_variant;
    o.storage_detuning = kTwoPi * r.cfg.protocols.storage_detuning_hz;
    o.second_swap_qubit_decay = r.cfg.protocols.second_swap_qubit_decay;
    o.frame_offset = kTwoPi * r.cfg.protocols.frame_offset_hz;
    o.phonon_t1s = r.cfg.phonon_t1s();
    o.tol = r.cfg.tolerances();
    o.threads = r.threads;
    return o;
}

void report_fit(Run &r, const FitResult &fit) {
    for (const auto &p : fit.params) {
        *r.out << "  " << p.name << " = " << io::format_significant(p.value, 6) << " +/- "
               << io::format_significant(p.uncertainty, 3) << '\n';
    }
    *r.out << "  converged = " << (fit.converged ? "yes" : "no") << '\n';
}

void cmd_modes(Run &r) {
    r.write("modes.csv", format_basis_csv(r.cfg.mode_basis()));
}

void cmd_rabi_map(Run &r) {
    const auto map = rabi_map(r.cfg.mode_basis(), r.cfg.qubit_params(), detuning_grid(r.cfg),
                              time_grid(r.cfg), rabi_options(r));
    r.write("rabi_map.csv", format_rabi_map_csv(map));
}

void cmd_swap(Run &r) {
    const auto basis = r.cfg.mode_basis();
    auto o = rabi_options(r);
    const auto swap =
        calibrate_swap(basis, r.cfg.qubit_params(), detuning_grid(r.cfg), time_grid(r.cfg), o);
    std::string csv = "delta_q_hz,duration_s,rise_time_s,residual_population\n";
    csv += io::format_shortest(swap.delta_q_during / kTwoPi) + ',' +
           io::format_shortest(swap.duration) + ',' + io::format_shortest(r.cfg.protocols.rise_time) +
           ',' + io::format_shortest(swap.residual_population) + '\n';
    r.write("swap.csv", csv);
}

void cmd_phonon_t1(Run &r) {
    const auto basis = r.cfg.mode_basis();
    const auto swap = resolve_swap(r, basis);
    const auto tau = linspace(0.0, r.cfg.protocols.tau_stop, r.cfg.protocols.tau_points);
    const auto sig = phonon_t1_signal(basis, r.cfg.qubit_params(), swap, tau, coherence_options(r));
    const auto fit = fit_decay(sig, r.cfg.protocols.t1_model);
    r.write("phonon_t1.csv", format_decay_csv(sig));
    r.write("phonon_t1_fit.csv", format_fit_csv(fit));
    report_fit(r, fit);
}

void cmd_phonon_t2(Run &r) {
    const auto basis = r.cfg.mode_basis();
    const auto swap = resolve_swap(r, basis);
    const auto tau = linspace(0.0, r.cfg.protocols.tau_stop, r.cfg.protocols.tau_points);
    const auto sig = phonon_t2_signal(basis, r.cfg.qubit_params(), swap, tau,
                                      kTwoPi * r.cfg.protocols.artificial_detuning_hz,
                                      coherence_options(r));
    const auto fit = fit_decay(sig, r.cfg.protocols.t2_model);
    r.write("phonon_t2.csv", format_decay_csv(sig));
    r.write("phonon_t2_fit.csv", format_fit_csv(fit));
    report_fit(r, fit);
}

void cmd_t1_sweep(Run &r) {
    const auto &p = r.cfg.protocols;
    SweepOptions o;
    o.pulse_time_grid = linspace(0.0, p.pulse_time_stop, p.pulse_time_points);
    o.storage_detuning = kTwoPi * p.storage_detuning_hz;
    o.second_swap_qubit_decay = p.second_swap_qubit_decay;
    o.phonon_t1s = r.cfg.phonon_t1s();
    o.tol = r.cfg.tolerances();
    o.threads = r.threads;
    auto det = linspace(p.sweep_detuning_start_hz, p.sweep_detuning_stop_hz,
                        p.sweep_detuning_points);
    for (double &d : det) {
        d *= kTwoPi;
    }
    const auto points = t1_vs_swap_amplitude(r.cfg.mode_basis(), r.cfg.qubit_params(), det,
                                             linspace(0.0, p.sweep_delay_stop, p.sweep_delay_points),
                                             o);
    r.write("t1_sweep.csv", format_sweep_csv(points));
}

std::vector<double> beam_axis(const RunConfig &c) {
    const auto prop = c.propagator();
    const double fsr = prop.free_spectral_range();
    const double centre = c.beamprop.l * fsr;
    const int n = static_cast<int>(std::ceil(c.beamprop.span_fsr * c.beamprop.points_per_fsr)) + 1;
    return linspace(centre - 0.5 * c.beamprop.span_fsr * fsr,
                    centre + 0.5 * c.beamprop.span_fsr * fsr, n);
}

SweepConfig beam_sweep_config(const Run &r) {
    SweepConfig s;
    s.threads = r.threads;
    s.min_prominence = r.cfg.beamprop.min_prominence;
    return s;
}

void cmd_beamprop_sweep(Run &r) {
    const auto spec =
        frequency_sweep(r.cfg.propagator(), r.cfg.beam_grid(), beam_axis(r.cfg), beam_sweep_config(r));
    r.write("spectrum.csv", format_spectrum_csv(spec));
    r.write("peaks.csv", format_peaks_csv(spec));
    *r.out << spec.peaks.size() << " peaks\n";
}

void cmd_beamprop_mode(Run &r) {
    const auto prop = r.cfg.propagator();
    const auto grid = r.cfg.beam_grid();
    double freq = r.cfg.beamprop.mode_frequency_hz;
    if (!(freq > 0.0)) {
        const auto spec = frequency_sweep(prop, grid, beam_axis(r.cfg), beam_sweep_config(r));
        if (spec.peaks.empty()) {
            throw NumericalError("beamprop-mode: the sweep found no resonance");
        }
        const auto best = std::max_element(
            spec.peaks.begin(), spec.peaks.end(),
            [](const Peak &a, const Peak &b) { return a.prominence < b.prominence; });
        freq = best->frequency;
    }
    ConvergeOptions o;
    o.max_iterations = r.cfg.beamprop.max_iterations;
    o.tolerance = r.cfg.beamprop.tolerance;
    const auto mode = converge_mode(prop, grid, freq, o);
    *r.out << "mode at " << io::format_significant(freq, 12) << " Hz converged in "
           << mode.iterations << " iterations (residual "
           << io::format_significant(mode.residual, 3) << ")\n";
    r.write("mode.bin", encode_mode_binary(mode.field));
}

void cmd_analyze(Run &r) {
    const auto &a = r.cfg.analysis;
    if (a.input.empty()) {
        throw ConfigError("analyze: no input map (use --input or analysis.input)");
    }
    const auto text = io::read_file(a.input);
    r.inputs.push_back({a.input, sha256_hex(text), text.size()});
    SpectroscopyMap map;
    try {
        map = parse_spectroscopy_csv(text);
    } catch (const InvalidInput &e) {
        throw IoError(std::string("analyze: ") + e.what());
    }
    const auto plot = max_value_plot(map);
    std::string mv = "freq_hz,max_amplitude\n";
    for (std::size_t i = 0; i < plot.freq_axis.size(); ++i) {
        mv += io::format_shortest(plot.freq_axis[i]) + ',' +
              io::format_shortest(plot.max_amplitude[i]) + '\n';
    }
    r.write("max_value.csv", mv);

    const double fsr = free_spectral_range(r.cfg.geometry, r.cfg.materials);
    const double window = a.window_hz > 0 ? a.window_hz : fsr;
    std::vector<LabeledFeature> features;
    std::size_t first = 0;
    int k = 0;
    const double f0 = plot.freq_axis.front();
    while (first < plot.freq_axis.size()) {
        const double hi = f0 + (k + 1) * window;
        std::size_t last = first;
        while (last < plot.freq_axis.size() && plot.freq_axis[last] < hi) {
            ++last;
        }
        if (last - first >= 16) {
            const auto feat = extract_main_feature(slice(plot, first, last - first));
            if (feat.low_confidence) {
                *r.out << "window " << k << ": minimum on the window edge, skipped\n";
            } else {
                const int l = a.first_l > 0 ? a.first_l + k
                                            : static_cast<int>(std::lround(feat.frequency / fsr));
                features.push_back({l, feat.frequency});
            }
        }
        first = last;
        ++k;
    }
    r.write("features.csv", format_features_csv(features));
    if (features.size() >= 2) {
        const auto fit = fit_longitudinal_velocity(features, r.cfg.geometry.substrate_thickness_h);
        std::string csv = "v_l_m_per_s,stderr_m_per_s,slope_hz,intercept_hz\n";
        csv += io::format_shortest(fit.v_longitudinal) + ',' + io::format_shortest(fit.stderr_v) +
               ',' + io::format_shortest(fit.slope) + ',' + io::format_shortest(fit.intercept) +
               '\n';
        r.write("velocity.csv", csv);
        *r.out << "v_l = " << io::format_significant(fit.v_longitudinal, 6) << " m/s\n";
    } else {
        *r.out << "fewer than two features; velocity fit skipped\n";
    }
}

void finish(Run &r, const Globals &g, double wall) {
    RunManifest m;
    m.tool_version = PQED_VERSION;
    m.subcommand = r.subcommand;
    m.preset = g.preset;
    m.config = r.cfg;
    m.inputs = r.inputs;
    for (const auto &o : r.outputs) {
        m.outputs.push_back(digest_file(o));
    }
    m.wall_time_s = wall;
    m.threads = r.threads;
    const fs::path p = r.path(r.subcommand + ".manifest.json");
    io::write_file_atomic(p, manifest_to_json(m));
    *r.out << "wrote " << p.string() << '\n';
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"phonon-qed: qubit / bulk-acoustic phonon simulation toolkit"};
    app.set_version_flag("--version", PQED_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("-c,--config", g.config_path, "INI configuration file");
    app.add_option("-p,--preset", g.preset, "named preset to start from")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--from-manifest", g.from_manifest,
                   "take the resolved configuration from a run manifest");
    app.add_option("-s,--set", g.sets, "override: section.key=value (repeatable)");
    app.add_option("-o,--output-dir", g.output_dir, "output directory (io.output_dir)");
    app.add_option("-j,--threads", g.threads,
                   "worker threads (default: PQED_THREADS or hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--dry-run", g.dry_run, "validate the configuration and exit");

    std::vector<std::string> overrides; // subcommand flags, applied last
    std::map<std::string, std::function<void(Run &)>> handlers;

    auto add = [&](const std::string &name, const std::string &help, auto handler) {
        auto *sub = app.add_subcommand(name, help);
        handlers[name] = handler;
        return sub;
    };

    std::optional<int> l_flag, count_flag;
    std::optional<std::string> picture_flag, engine_flag, input_flag;
    std::optional<double> freq_flag;

    auto *modes = add("modes", "mode frequencies and couplings", cmd_modes);
    modes->add_option("--l", l_flag, "longitudinal mode number");
    modes->add_option("--picture", picture_flag, "discrete or semi-continuum");
    modes->add_option("--count", count_flag, "number of transverse modes");
    auto *rabi = add("rabi-map", "qubit population versus detuning and time", cmd_rabi_map);
    rabi->add_option("--engine", engine_flag, "amplitude or lindblad");
    add("swap-calibrate", "optimal swap detuning and duration", cmd_swap);
    add("phonon-t1", "phonon T1 signal and fit", cmd_phonon_t1);
    add("phonon-t2", "phonon Ramsey T2 signal and fit", cmd_phonon_t2);
    add("t1-sweep", "effective T1 versus swap detuning", cmd_t1_sweep);
    add("beamprop-sweep", "beam-propagation resonance spectrum", cmd_beamprop_sweep);
    auto *bmode = add("beamprop-mode", "converged beam-propagation mode profile", cmd_beamprop_mode);
    bmode->add_option("--frequency", freq_flag, "resonance frequency in Hz");
    auto *analyze = add("analyze", "max-value plot, features and velocity fit", cmd_analyze);
    analyze->add_option("--input", input_flag, "spectroscopy map CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    Run run;
    run.out = &out;
    for (auto *sub : app.get_subcommands()) {
        run.subcommand = sub->get_name();
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        if (!g.from_manifest.empty()) {
            const auto text = io::read_file(g.from_manifest);
            const auto m = manifest_from_json(text);
            if (m.subcommand != run.subcommand) {
                throw ConfigError("manifest was written by '" + m.subcommand + "', not '" +
                                  run.subcommand + "'");
            }
            run.cfg = m.config;
        } else {
            run.cfg = g.preset.empty() ? RunConfig{} : preset(g.preset);
        }
        if (!g.config_path.empty()) {
            const auto text = io::read_file(g.config_path);
            apply_ini(run.cfg, text, g.config_path);
            run.inputs.push_back({g.config_path, sha256_hex(text), text.size()});
        }
        for (const auto &s : g.sets) {
            apply_override(run.cfg, s);
        }
        if (l_flag) {
            run.cfg.basis.l = *l_flag;
        }
        if (count_flag) {
            run.cfg.basis.count = *count_flag;
        }
        if (picture_flag) {
            set_value(run.cfg, "basis", "picture", *picture_flag);
        }
        if (engine_flag) {
            set_value(run.cfg, "dynamics", "engine", *engine_flag);
        }
        if (freq_flag) {
            run.cfg.beamprop.mode_frequency_hz = *freq_flag;
        }
        if (input_flag) {
            run.cfg.analysis.input = *input_flag;
        }
        if (!g.output_dir.empty()) {
            run.cfg.io.output_dir = g.output_dir;
        }
        run.cfg.validate();
        run.threads = resolve_threads(g.threads);

        if (g.dry_run) {
            if (run.subcommand != "analyze" && run.subcommand.rfind("beamprop", 0) != 0) {
                (void)run.cfg.mode_basis();
            }
            out << to_ini(run.cfg);
            out << "dry run: configuration is valid\n";
            return kExitOk;
        }
        handlers.at(run.subcommand)(run);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        finish(run, g, wall);
    } catch (const InvalidInput &e) {
        err << "phonon-qed: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError &e) {
        err << "phonon-qed: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const IoError &e) {
        err << "phonon-qed: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error &e) {
        err << "phonon-qed: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception &e) {
        err << "phonon-qed: error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace pqed::tools
