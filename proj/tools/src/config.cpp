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

#include "pqed_tools/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "pqed/csv.hpp"

namespace pqed::tools {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

struct Unit {
    const char *name;
    double scale;
};

const std::map<std::string, std::vector<Unit>> &unit_table() {
    static const std::map<std::string, std::vector<Unit>> table = {
        {"length", {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}}},
        {"time", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}}},
        {"frequency", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
        {"velocity", {{"m/s", 1.0}, {"km/s", 1e3}}},
        {"pressure", {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"GPa", 1e9}}},
        {"piezo", {{"m/V", 1.0}, {"pm/V", 1e-12}}},
        {"field", {{"V/m", 1.0}, {"mV/m", 1e-3}}},
        {"", {}},
    };
    return table;
}

struct Key {
    std::string section;
    std::string name;
    std::function<void(RunConfig &, std::string_view)> set;
    std::function<std::string(const RunConfig &)> get;
};

using DoubleRef = std::function<double &(RunConfig &)>;
using IntRef = std::function<int &(RunConfig &)>;
using BoolRef = std::function<bool &(RunConfig &)>;
using StringRef = std::function<std::string &(RunConfig &)>;

std::string fmt(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return io::format_shortest(v);
}

Key quantity(std::string section, std::string name, std::string dim, DoubleRef ref) {
    return {section, name,
            [dim, ref](RunConfig &c, std::string_view v) { ref(c) = parse_quantity(v, dim); },
            [ref](const RunConfig &c) { return fmt(ref(const_cast<RunConfig &>(c))); }};
}

Key integer(std::string section, std::string name, IntRef ref) {
    return {section, name,
            [ref](RunConfig &c, std::string_view v) {
                v = trim(v);
                int out = 0;
                const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
                if (ec != std::errc() || p != v.data() + v.size()) {
                    throw ConfigError("not an integer: '" + std::string(v) + "'");
                }
                ref(c) = out;
            },
            [ref](const RunConfig &c) { return std::to_string(ref(const_cast<RunConfig &>(c))); }};
}

Key boolean(std::string section, std::string name, BoolRef ref) {
    return {section, name,
            [ref](RunConfig &c, std::string_view v) {
                v = trim(v);
                if (v == "true" || v == "1" || v == "yes" || v == "on") {
                    ref(c) = true;
                } else if (v == "false" || v == "0" || v == "no" || v == "off") {
                    ref(c) = false;
                } else {
                    throw ConfigError("not a boolean: '" + std::string(v) + "'");
                }
            },
            [ref](const RunConfig &c) {
                return std::string(ref(const_cast<RunConfig &>(c)) ? "true" : "false");
            }};
}

Key text(std::string section, std::string name, StringRef ref) {
    return {section, name,
            [ref](RunConfig &c, std::string_view v) { ref(c) = std::string(trim(v)); },
            [ref](const RunConfig &c) { return ref(const_cast<RunConfig &>(c)); }};
}

template <class E, class Parse>
Key enumeration(std::string section, std::string name, std::function<E &(RunConfig &)> ref,
                Parse parse) {
    return {section, name,
            [ref, parse](RunConfig &c, std::string_view v) {
                try {
                    ref(c) = parse(std::string(trim(v)));
                } catch (const InvalidInput &e) {
                    throw ConfigError(e.what());
                }
            },
            [ref](const RunConfig &c) {
                return std::string(to_string(ref(const_cast<RunConfig &>(c))));
            }};
}

#define PQED_REF(T, expr) [](RunConfig &c) -> T & { return c.expr; }

const std::vector<Key> &registry() {
    static const std::vector<Key> keys = {
        quantity("geometry", "substrate_thickness_h", "length",
                 PQED_REF(double, geometry.substrate_thickness_h)),
        quantity("geometry", "transducer_diameter_d", "length",
                 PQED_REF(double, geometry.transducer_diameter_d)),
        quantity("geometry", "transducer_thickness_t", "length",
                 PQED_REF(double, geometry.transducer_thickness_t)),
        quantity("geometry", "big_cylinder_radius_R", "length",
                 PQED_REF(double, geometry.big_cylinder_radius_R)),

        quantity("materials", "v_longitudinal", "velocity",
                 PQED_REF(double, materials.v_longitudinal)),
        quantity("materials", "v_transverse_effective", "velocity",
                 PQED_REF(double, materials.v_transverse_effective)),
        quantity("materials", "stiffness_c33", "pressure",
                 PQED_REF(double, materials.stiffness_c33)),
        quantity("materials", "piezo_d33", "piezo", PQED_REF(double, materials.piezo_d33)),
        quantity("materials", "field_E0", "field", PQED_REF(double, materials.field_E0)),
        quantity("materials", "coupling_scale", "", PQED_REF(double, materials.coupling_scale)),

        quantity("qubit", "t1_qubit", "time", PQED_REF(double, qubit.t1_qubit)),
        quantity("qubit", "delta_q_hz", "frequency", PQED_REF(double, qubit.delta_q_hz)),

        integer("basis", "l", PQED_REF(int, basis.l)),
        enumeration<Picture>("basis", "picture", PQED_REF(Picture, basis.picture),
                             picture_from_string),
        integer("basis", "count", PQED_REF(int, basis.count)),

        enumeration<Engine>("dynamics", "engine", PQED_REF(Engine, dynamics.engine),
                            engine_from_string),
        integer("dynamics", "fock_truncation", PQED_REF(int, dynamics.fock_truncation)),
        integer("dynamics", "dimension_cap", PQED_REF(int, dynamics.dimension_cap)),
        quantity("dynamics", "phonon_t1", "time", PQED_REF(double, dynamics.phonon_t1)),
        quantity("dynamics", "time_stop", "time", PQED_REF(double, dynamics.time_stop)),
        integer("dynamics", "time_points", PQED_REF(int, dynamics.time_points)),
        quantity("dynamics", "detuning_start_hz", "frequency",
                 PQED_REF(double, dynamics.detuning_start_hz)),
        quantity("dynamics", "detuning_stop_hz", "frequency",
                 PQED_REF(double, dynamics.detuning_stop_hz)),
        integer("dynamics", "detuning_points", PQED_REF(int, dynamics.detuning_points)),
        quantity("dynamics", "rtol", "", PQED_REF(double, dynamics.rtol)),
        quantity("dynamics", "atol", "", PQED_REF(double, dynamics.atol)),

        quantity("protocols", "swap_delta_q_hz", "frequency",
                 PQED_REF(double, protocols.swap_delta_q_hz)),
        quantity("protocols", "swap_duration", "time", PQED_REF(double, protocols.swap_duration)),
        quantity("protocols", "rise_time", "time", PQED_REF(double, protocols.rise_time)),
        quantity("protocols", "storage_detuning_hz", "frequency",
                 PQED_REF(double, protocols.storage_detuning_hz)),
        quantity("protocols", "frame_offset_hz", "frequency",
                 PQED_REF(double, protocols.frame_offset_hz)),
        enumeration<T1Variant>("protocols", "t1_variant", PQED_REF(T1Variant, protocols.t1_variant),
                               t1_variant_from_string),
        boolean("protocols", "second_swap_qubit_decay",
                PQED_REF(bool, protocols.second_swap_qubit_decay)),
        quantity("protocols", "tau_stop", "time", PQED_REF(double, protocols.tau_stop)),
        integer("protocols", "tau_points", PQED_REF(int, protocols.tau_points)),
        quantity("protocols", "artificial_detuning_hz", "frequency",
                 PQED_REF(double, protocols.artificial_detuning_hz)),
        enumeration<FitModel>("protocols", "t1_model", PQED_REF(FitModel, protocols.t1_model),
                              fit_model_from_string),
        enumeration<FitModel>("protocols", "t2_model", PQED_REF(FitModel, protocols.t2_model),
                              fit_model_from_string),
        quantity("protocols", "sweep_detuning_start_hz", "frequency",
                 PQED_REF(double, protocols.sweep_detuning_start_hz)),
        quantity("protocols", "sweep_detuning_stop_hz", "frequency",
                 PQED_REF(double, protocols.sweep_detuning_stop_hz)),
        integer("protocols", "sweep_detuning_points",
                PQED_REF(int, protocols.sweep_detuning_points)),
        quantity("protocols", "sweep_delay_stop", "time",
                 PQED_REF(double, protocols.sweep_delay_stop)),
        integer("protocols", "sweep_delay_points", PQED_REF(int, protocols.sweep_delay_points)),
        quantity("protocols", "pulse_time_stop", "time",
                 PQED_REF(double, protocols.pulse_time_stop)),
        integer("protocols", "pulse_time_points", PQED_REF(int, protocols.pulse_time_points)),

        integer("beamprop", "grid_n", PQED_REF(int, beamprop.grid_n)),
        quantity("beamprop", "extent", "length", PQED_REF(double, beamprop.extent)),
        quantity("beamprop", "v_longitudinal", "velocity",
                 PQED_REF(double, beamprop.v_longitudinal)),
        quantity("beamprop", "v_transverse", "velocity", PQED_REF(double, beamprop.v_transverse)),
        quantity("beamprop", "v_aln", "velocity", PQED_REF(double, beamprop.v_aln)),
        quantity("beamprop", "absorber_width", "length",
                 PQED_REF(double, beamprop.absorber_width)),
        quantity("beamprop", "absorber_strength", "",
                 PQED_REF(double, beamprop.absorber_strength)),
        integer("beamprop", "roundtrips", PQED_REF(int, beamprop.roundtrips)),
        boolean("beamprop", "aln", PQED_REF(bool, beamprop.aln)),
        boolean("beamprop", "absorber", PQED_REF(bool, beamprop.absorber)),
        enumeration<Dispersion>("beamprop", "dispersion", PQED_REF(Dispersion, beamprop.dispersion),
                                dispersion_from_string),
        enumeration<SumWindow>("beamprop", "window", PQED_REF(SumWindow, beamprop.window),
                               sum_window_from_string),
        enumeration<FftPlanner>("beamprop", "planner", PQED_REF(FftPlanner, beamprop.planner),
                                fft_planner_from_string),
        integer("beamprop", "l", PQED_REF(int, beamprop.l)),
        quantity("beamprop", "span_fsr", "", PQED_REF(double, beamprop.span_fsr)),
        integer("beamprop", "points_per_fsr", PQED_REF(int, beamprop.points_per_fsr)),
        quantity("beamprop", "min_prominence", "", PQED_REF(double, beamprop.min_prominence)),
        quantity("beamprop", "mode_frequency_hz", "frequency",
                 PQED_REF(double, beamprop.mode_frequency_hz)),
        integer("beamprop", "max_iterations", PQED_REF(int, beamprop.max_iterations)),
        quantity("beamprop", "tolerance", "", PQED_REF(double, beamprop.tolerance)),

        text("io", "output_dir", PQED_REF(std::string, io.output_dir)),

        text("analysis", "input", PQED_REF(std::string, analysis.input)),
        quantity("analysis", "window_hz", "frequency", PQED_REF(double, analysis.window_hz)),
        integer("analysis", "first_l", PQED_REF(int, analysis.first_l)),
    };
    return keys;
}

#undef PQED_REF

const Key &find_key(std::string_view section, std::string_view key) {
    bool section_known = false;
    for (const auto &k : registry()) {
        if (k.section == section) {
            section_known = true;
            if (k.name == key) {
                return k;
            }
        }
    }
    if (!section_known) {
        throw ConfigError("unknown section [" + std::string(section) + "]");
    }
    throw ConfigError("unknown key '" + std::string(key) + "' in section [" +
                      std::string(section) + "]");
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ConfigError(what);
    }
}

} // namespace

double parse_quantity(std::string_view text, std::string_view dimension) {
    text = trim(text);
    if (text.empty()) {
        throw ConfigError("empty value");
    }
    std::string_view num = text;
    if (!num.empty() && num.front() == '+') {
        num.remove_prefix(1);
    }
    double value = 0.0;
    const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc()) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    const std::string_view unit = trim(std::string_view(p, num.data() + num.size() - p));
    if (unit.empty()) {
        return value;
    }
    const auto &table = unit_table();
    const auto it = table.find(std::string(dimension));
    if (it != table.end()) {
        for (const auto &u : it->second) {
            if (unit == u.name) {
                return value * u.scale;
            }
        }
    }
    throw ConfigError("unit '" + std::string(unit) + "' is not valid for a " +
                      (dimension.empty() ? std::string("dimensionless") : std::string(dimension)) +
                      " value");
}

void set_value(RunConfig &cfg, std::string_view section, std::string_view key,
               std::string_view value) {
    find_key(section, key).set(cfg, value);
}

void apply_override(RunConfig &cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ConfigError("override must look like section.key=value: '" +
                          std::string(assignment) + "'");
    }
    set_value(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
              assignment.substr(eq + 1));
}

void apply_ini(RunConfig &cfg, std::string_view text, std::string_view source) {
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        try {
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ConfigError("malformed section header");
                }
                section = std::string(trim(line.substr(1, line.size() - 2)));
                bool known = false;
                for (const auto &k : registry()) {
                    known = known || k.section == section;
                }
                if (!known) {
                    throw ConfigError("unknown section [" + section + "]");
                }
            } else {
                const auto eq = line.find('=');
                if (eq == std::string_view::npos) {
                    throw ConfigError("expected key = value");
                }
                if (section.empty()) {
                    throw ConfigError("key outside of any section");
                }
                set_value(cfg, section, trim(line.substr(0, eq)), line.substr(eq + 1));
            }
        } catch (const ConfigError &e) {
            throw ConfigError(where + e.what());
        }
        if (end == text.size()) {
            break;
        }
    }
}

std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
resolved(const RunConfig &cfg) {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> out;
    for (const auto &k : registry()) {
        if (out.empty() || out.back().first != k.section) {
            out.push_back({k.section, {}});
        }
        out.back().second.emplace_back(k.name, k.get(cfg));
    }
    return out;
}

std::string to_ini(const RunConfig &cfg) {
    std::string out;
    for (const auto &[section, keys] : resolved(cfg)) {
        if (!out.empty()) {
            out += '\n';
        }
        out += '[' + section + "]\n";
        for (const auto &[k, v] : keys) {
            out += k + " = " + v + '\n';
        }
    }
    return out;
}

void RunConfig::validate() const {
    try {
        geometry.validate();
        materials.validate();
    } catch (const ConfigError &) {
        throw;
    } catch (const InvalidInput &e) {
        throw ConfigError(e.what());
    }
    require(qubit.t1_qubit > 0, "qubit.t1_qubit must be positive");
    require(basis.l >= 1, "basis.l must be >= 1");
    require(basis.count >= 1, "basis.count must be >= 1");
    require(dynamics.fock_truncation >= 2, "dynamics.fock_truncation must be >= 2");
    require(dynamics.dimension_cap >= 4, "dynamics.dimension_cap must be >= 4");
    require(dynamics.phonon_t1 > 0, "dynamics.phonon_t1 must be positive (inf = lossless)");
    require(dynamics.time_stop > 0 && dynamics.time_points >= 3,
            "dynamics time grid needs time_stop > 0 and >= 3 points");
    require(dynamics.detuning_points >= 1, "dynamics.detuning_points must be >= 1");
    require(dynamics.detuning_points == 1 ||
                dynamics.detuning_stop_hz > dynamics.detuning_start_hz,
            "dynamics detuning range must be increasing");
    require(dynamics.rtol > 0 && dynamics.atol > 0, "dynamics tolerances must be positive");
    require(protocols.swap_duration >= 0, "protocols.swap_duration must be >= 0");
    require(protocols.rise_time >= 0, "protocols.rise_time must be >= 0");
    require(protocols.tau_stop > 0 && protocols.tau_points >= 8,
            "protocols tau grid needs tau_stop > 0 and >= 8 points");
    require(protocols.sweep_detuning_points >= 1, "protocols.sweep_detuning_points must be >= 1");
    require(protocols.sweep_delay_stop > 0 && protocols.sweep_delay_points >= 8,
            "protocols sweep delay grid needs a positive stop and >= 8 points");
    require(protocols.pulse_time_stop > 0 && protocols.pulse_time_points >= 3,
            "protocols pulse grid needs a positive stop and >= 3 points");
    require(beamprop.grid_n >= 8, "beamprop.grid_n must be >= 8");
    require(beamprop.span_fsr > 0, "beamprop.span_fsr must be positive");
    require(beamprop.points_per_fsr >= 200, "beamprop.points_per_fsr must be >= 200");
    require(beamprop.min_prominence >= 0, "beamprop.min_prominence must be >= 0");
    require(beamprop.max_iterations >= 1, "beamprop.max_iterations must be >= 1");
    require(beamprop.tolerance > 0, "beamprop.tolerance must be positive");
    require(beamprop.l >= 1, "beamprop.l must be >= 1");
    require(!io.output_dir.empty(), "io.output_dir must not be empty");
    require(analysis.window_hz >= 0, "analysis.window_hz must be >= 0");
    require(analysis.first_l >= 0, "analysis.first_l must be >= 0");
    try {
        propagator().validate(beam_grid());
    } catch (const ConfigError &) {
        throw;
    } catch (const InvalidInput &e) {
        throw ConfigError(std::string("beamprop: ") + e.what());
    }
}

QubitParams RunConfig::qubit_params() const {
    QubitParams q;
    q.t1_qubit = qubit.t1_qubit;
    q.detuning_delta_q = kTwoPi * qubit.delta_q_hz;
    return q;
}

ModeBasis RunConfig::mode_basis() const {
    try {
        return build_basis(basis.l, basis.picture, basis.count, geometry, materials);
    } catch (const InvalidInput &e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> RunConfig::phonon_t1s() const {
    if (std::isinf(dynamics.phonon_t1)) {
        return {};
    }
    return std::vector<double>(static_cast<std::size_t>(basis.count), dynamics.phonon_t1);
}

ode::Tolerances RunConfig::tolerances() const { return {dynamics.rtol, dynamics.atol}; }

PropagatorConfig RunConfig::propagator() const {
    PropagatorConfig p;
    p.geom = geometry;
    p.mat_substrate = materials;
    p.mat_substrate.v_longitudinal = beamprop.v_longitudinal;
    p.mat_substrate.v_transverse_effective = beamprop.v_transverse;
    p.v_aln_longitudinal = beamprop.v_aln;
    p.absorber_width = beamprop.absorber_width;
    p.absorber_strength = beamprop.absorber_strength;
    p.roundtrips = beamprop.roundtrips;
    p.aln_enabled = beamprop.aln;
    p.absorber_enabled = beamprop.absorber;
    p.dispersion = beamprop.dispersion;
    p.window = beamprop.window;
    p.planner = beamprop.planner;
    return p;
}

BeamGrid RunConfig::beam_grid() const {
    BeamGrid g;
    g.nx = static_cast<std::size_t>(beamprop.grid_n);
    g.ny = static_cast<std::size_t>(beamprop.grid_n);
    g.extent = beamprop.extent;
    return g;
}

std::vector<std::string> preset_names() {
    return {"paper-l503", "paper-l429", "paper-beamprop", "paper-l503-semicontinuum"};
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    if (name == "paper-l503" || name == "paper-l429") {
        c.materials.coupling_scale = 0.85;
        c.basis.picture = Picture::Discrete;
        c.basis.count = 4;
        if (name == "paper-l429") {
            c.basis.l = 429;
            c.beamprop.l = 429;
        }
        return c;
    }
    if (name == "paper-beamprop") {
        return c;
    }
    if (name == "paper-l503-semicontinuum") {
        c.materials.coupling_scale = 0.85;
        c.basis.picture = Picture::SemiContinuum;
        c.basis.count = 81;
        c.dynamics.phonon_t1 = std::numeric_limits<double>::infinity();
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

} // namespace pqed::tools
