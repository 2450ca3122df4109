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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "pqed/csv.hpp"
#include "pqed/modes.hpp"
#include "pqed/rabi_map.hpp"
#include "pqed/spectroscopy.hpp"
#include "pqed/swap.hpp"
#include "pqed_tools/cli.hpp"
#include "pqed_tools/config.hpp"
#include "pqed_tools/manifest.hpp"

using namespace pqed;
using namespace pqed::tools;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "phonon-qed");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / "pqed_cli_tests" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) { return io::read_file(p); }

std::size_t lines(const std::string &s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

int exec_status(const std::string &cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("quantities with units") {
    CHECK(parse_quantity("420e-6", "length") == 420e-6);
    CHECK(parse_quantity("420 um", "length") == doctest::Approx(420e-6).epsilon(1e-15));
    CHECK(parse_quantity("420µm", "length") == doctest::Approx(420e-6).epsilon(1e-15));
    CHECK(parse_quantity("13.2 MHz", "frequency") == doctest::Approx(13.2e6));
    CHECK(parse_quantity("-3MHz", "frequency") == doctest::Approx(-3e6));
    CHECK(parse_quantity("11.1 km/s", "velocity") == doctest::Approx(11100));
    CHECK(parse_quantity("390 GPa", "pressure") == doctest::Approx(390e9));
    CHECK(parse_quantity("6 us", "time") == doctest::Approx(6e-6));
    CHECK(std::isinf(parse_quantity("inf", "time")));
    CHECK_THROWS_AS(parse_quantity("5 s", "length"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("5 furlongs", "length"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("abc", "frequency"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("1 Hz", ""), ConfigError);
}

TEST_CASE("defaults carry the reference device values") {
    const RunConfig cfg;
    CHECK(cfg.geometry.substrate_thickness_h == ResonatorGeometry{}.substrate_thickness_h);
    CHECK(cfg.materials.v_longitudinal == MaterialConstants{}.v_longitudinal);
    CHECK(cfg.basis.l == 503);
    CHECK(cfg.beamprop.roundtrips == 400);
    CHECK(cfg.beamprop.grid_n == 1024);
    CHECK(cfg.protocols.artificial_detuning_hz == 200e3);
    CHECK(cfg.protocols.storage_detuning_hz == -3e6);
    CHECK(cfg.qubit.t1_qubit == 6e-6);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("INI parsing") {
    RunConfig cfg;
    apply_ini(cfg,
              "# comment\n"
              "[geometry]\n"
              "substrate_thickness_h = 840 um   ; trailing comment\n"
              "\n"
              "[basis]\n"
              "picture = semi-continuum\n"
              "count = 81\n"
              "[dynamics]\n"
              "engine = lindblad\n",
              "run.ini");
    CHECK(cfg.geometry.substrate_thickness_h == doctest::Approx(840e-6));
    CHECK(cfg.basis.picture == Picture::SemiContinuum);
    CHECK(cfg.basis.count == 81);
    CHECK(cfg.dynamics.engine == Engine::Lindblad);

    const auto fails_with = [](const std::string &text, const std::string &needle) {
        RunConfig c;
        try {
            apply_ini(c, text, "bad.ini");
        } catch (const ConfigError &e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_with("[geometry]\nsubstrate_thickness = 1 mm\n", "bad.ini:2"));
    CHECK(fails_with("[nonsense]\n", "bad.ini:1"));
    CHECK(fails_with("[basis]\ncount = three\n", "bad.ini:2"));
    CHECK(fails_with("[geometry]\nsubstrate_thickness_h = 420 MHz\n", "bad.ini:2"));
    CHECK(fails_with("count = 3\n", "bad.ini:1"));
    CHECK(fails_with("[basis]\ncount\n", "bad.ini:2"));
    CHECK(fails_with("[beamprop]\naln = maybe\n", "bad.ini:2"));
}

TEST_CASE("overrides, canonical text and presets") {
    RunConfig cfg;
    apply_override(cfg, "qubit.t1_qubit=7us");
    CHECK(cfg.qubit.t1_qubit == doctest::Approx(7e-6));
    CHECK_THROWS_AS(apply_override(cfg, "qubit.t1=7us"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "t1_qubit=7us"), ConfigError);

    RunConfig back;
    apply_ini(back, to_ini(cfg));
    CHECK(resolved(back) == resolved(cfg));

    const auto names = preset_names();
    for (const char *n : {"paper-l503", "paper-l429", "paper-beamprop"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
        CHECK_NOTHROW(preset(n).validate());
    }
    CHECK(preset("paper-l503").materials.coupling_scale == 0.85);
    CHECK(preset("paper-l429").basis.l == 429);
    CHECK(preset("paper-l429").beamprop.l == 429);
    CHECK_THROWS_AS(preset("paper-l999"), ConfigError);

    RunConfig bad;
    bad.materials.coupling_scale = 3;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("manifest JSON round trip") {
    RunManifest m;
    m.tool_version = "1.2.3";
    m.subcommand = "modes";
    m.preset = "paper-l503";
    m.config = preset("paper-l503");
    m.outputs.push_back({"out/modes.csv", sha256_hex("abc"), 3});
    m.wall_time_s = 0.25;
    m.threads = 2;
    const auto text = manifest_to_json(m);
    const auto back = manifest_from_json(text);
    CHECK(back.subcommand == "modes");
    CHECK(back.threads == 2);
    CHECK(resolved(back.config) == resolved(m.config));
    CHECK(back.outputs.at(0).sha256 == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(manifest_to_json(back) == text);
    CHECK_THROWS(manifest_from_json("{"));
}

TEST_CASE("modes subcommand writes the basis and a manifest") {
    const auto dir = scratch("modes");
    const auto r = run({"modes", "--l", "503", "--picture", "discrete", "--count", "4", "-o", dir.string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "modes.csv");
    CHECK(csv.rfind("l,m,omega_hz,g_hz,beta,basis_radius_m\n", 0) == 0);
    CHECK(lines(csv) == 5);
    const auto j = nlohmann::json::parse(slurp(dir / "modes.manifest.json"));
    CHECK(j["subcommand"] == "modes");
    CHECK(j["config"]["basis"]["count"] == "4");
    CHECK(j["config"]["geometry"]["substrate_thickness_h"] == "0.00042");
    REQUIRE(j["outputs"].size() == 1);
    CHECK(j["outputs"][0]["sha256"] == sha256_hex(csv));
    CHECK(j["outputs"][0]["bytes"] == csv.size());
    CHECK(j.contains("wall_time_s"));
}

TEST_CASE("rabi map minimum agrees with swap calibration") {
    const auto dir = scratch("rabi");
    REQUIRE(run({"rabi-map", "-o", dir.string()}).code == 0);
    REQUIRE(run({"swap-calibrate", "-o", dir.string()}).code == 0);
    const auto map = parse_rabi_map_csv(slurp(dir / "rabi_map.csv"));
    CHECK(map.population.rows() == 141);
    CHECK(map.population.cols() == 801);
    const auto text = slurp(dir / "swap.csv");
    CHECK(text.rfind("delta_q_hz,duration_s,rise_time_s,residual_population\n", 0) == 0);
    const auto row = io::split_csv_line(std::string_view(text).substr(text.find('\n') + 1));
    const double duration = io::parse_double(row.at(1));

    std::size_t resonant = 0;
    for (std::size_t i = 0; i < map.detuning_axis.size(); ++i) {
        if (std::abs(map.detuning_axis[i]) < std::abs(map.detuning_axis[resonant])) {
            resonant = i;
        }
    }
    REQUIRE(std::abs(map.detuning_axis[resonant]) < 1.0);
    std::vector<double> trace(map.time_axis.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        trace[k] = map.population(static_cast<Eigen::Index>(resonant), static_cast<Eigen::Index>(k));
    }
    const auto k = first_local_minimum(trace);
    REQUIRE(k);
    const double step = map.time_axis[1] - map.time_axis[0];
    CHECK(std::abs(map.time_axis[*k] - duration) <= step + 1e-15);
}

TEST_CASE("analyze recovers the free spectral range from a synthetic map") {
    const auto dir = scratch("analyze");
    const ResonatorGeometry geom;
    const MaterialConstants mat;
    const double fsr = free_spectral_range(geom, mat);
    SpectroscopyMap m;
    m.x_axis = {-2, -1, 0, 1, 2};
    const int per = 200;
    for (int k = 0; k < 9 * per; ++k) {
        m.freq_axis.push_back((496.5 + static_cast<double>(k) / per) * fsr);
    }
    m.amplitude.resize(static_cast<Eigen::Index>(m.freq_axis.size()), 5);
    for (std::size_t k = 0; k < m.freq_axis.size(); ++k) {
        double v = 1.0;
        for (int l = 497; l <= 505; ++l) {
            const double c = mode_frequency(l, 0, geom, mat, geom.transducer_diameter_d / 2) / kTwoPi;
            v -= 0.5 / (1 + std::pow((m.freq_axis[k] - c) / 80e3, 2));
        }
        for (Eigen::Index i = 0; i < 5; ++i) {
            m.amplitude(static_cast<Eigen::Index>(k), i) = v * (1.0 - 0.05 * std::abs(static_cast<double>(i) - 2));
        }
    }
    io::write_file_atomic(dir / "map.csv", format_spectroscopy_csv(m));
    const auto r = run({"analyze", "--input", (dir / "map.csv").string(), "-o", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(dir / "max_value.csv")) == 9 * per + 1);
    const auto feats = slurp(dir / "features.csv");
    REQUIRE(lines(feats) == 10);
    std::vector<double> f;
    std::vector<int> ls;
    std::istringstream in(feats.substr(feats.find('\n') + 1));
    for (std::string line; std::getline(in, line);) {
        const auto cells = io::split_csv_line(line);
        ls.push_back(static_cast<int>(io::parse_double(cells[0])));
        f.push_back(io::parse_double(cells[1]));
    }
    CHECK(ls.front() == 497);
    CHECK(ls.back() == 505);
    for (std::size_t k = 1; k < f.size(); ++k) {
        CHECK(std::abs(f[k] - f[k - 1] - 13.2e6) < 0.05e6);
    }
    const auto vel = slurp(dir / "velocity.csv");
    const std::string body = vel.substr(vel.find('\n') + 1);
    const auto cells = io::split_csv_line(body);
    CHECK(io::parse_double(cells[0]) == doctest::Approx(1.11e4).epsilon(1e-3));
    const auto j = nlohmann::json::parse(slurp(dir / "analyze.manifest.json"));
    REQUIRE(j["inputs"].size() == 1);
    CHECK(j["inputs"][0]["sha256"] == sha256_hex(slurp(dir / "map.csv")));
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> common = {"--set", "dynamics.detuning_points=21",
                                             "--set", "dynamics.time_points=201"};
    auto args_a = common;
    args_a.insert(args_a.begin(), "rabi-map");
    args_a.insert(args_a.end(), {"-o", a.string(), "--threads", "1"});
    auto args_b = common;
    args_b.insert(args_b.begin(), "rabi-map");
    args_b.insert(args_b.end(), {"-o", b.string(), "--threads", "3"});
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    CHECK(slurp(a / "rabi_map.csv") == slurp(b / "rabi_map.csv"));
    const auto ja = nlohmann::json::parse(slurp(a / "rabi-map.manifest.json"));
    const auto jb = nlohmann::json::parse(slurp(b / "rabi-map.manifest.json"));
    CHECK(ja["threads"] == 1);
    CHECK(jb["threads"] == 3);
    CHECK(ja["outputs"][0]["sha256"] == jb["outputs"][0]["sha256"]);
}

TEST_CASE("a manifest reproduces its run") {
    const auto a = scratch("man_a"), b = scratch("man_b");
    REQUIRE(run({"--preset", "paper-l503", "phonon-t2", "-o", a.string(), "--set",
                 "protocols.tau_points=101", "--set", "protocols.artificial_detuning_hz=150kHz"})
                .code == 0);
    REQUIRE(run({"phonon-t2", "--from-manifest", (a / "phonon-t2.manifest.json").string(), "-o",
                 b.string()})
                .code == 0);
    CHECK(slurp(a / "phonon_t2.csv") == slurp(b / "phonon_t2.csv"));
    CHECK(slurp(a / "phonon_t2_fit.csv") == slurp(b / "phonon_t2_fit.csv"));
    const auto ja = nlohmann::json::parse(slurp(a / "phonon-t2.manifest.json"));
    const auto jb = nlohmann::json::parse(slurp(b / "phonon-t2.manifest.json"));
    auto ca = ja["config"], cb = jb["config"];
    ca["io"].erase("output_dir");
    cb["io"].erase("output_dir");
    CHECK(ca == cb);
    CHECK(run({"phonon-t1", "--from-manifest", (a / "phonon-t2.manifest.json").string()}).code == 2);
}

TEST_CASE("dry run validates without writing") {
    const auto dir = scratch("dry");
    const auto r = run({"--dry-run", "-p", "paper-l429", "modes", "-o", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("[basis]") != std::string::npos);
    CHECK(r.out.find("l = 429") != std::string::npos);
    CHECK(!fs::exists(dir));
    CHECK(run({"--dry-run", "modes", "--set", "basis.count=0", "-o", dir.string()}).code == 2);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    CHECK(run({"modes", "--set", "basis.nope=1", "-o", dir.string()}).code == 2);
    CHECK(run({"modes", "--set", "geometry.substrate_thickness_h=3 GHz", "-o", dir.string()}).code == 2);
    CHECK(run({"modes", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--config", (dir / "missing.ini").string(), "modes"}).code == 4);
    CHECK(run({"analyze", "--input", (dir / "missing.csv").string(), "-o", dir.string()}).code == 4);
    CHECK(run({"analyze", "-o", dir.string()}).code == 2);
    CHECK(run({"swap-calibrate", "--set", "dynamics.time_stop=0.1us", "-o", dir.string()}).code == 3);
    io::write_file_atomic(dir / "blocker", "x");
    CHECK(run({"modes", "-o", (dir / "blocker" / "sub").string()}).code == 4);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("the executable reports the same exit codes") {
    const std::string exe = PQED_CLI_PATH;
    const auto dir = scratch("exe");
    CHECK(exec_status(exe + " --version") == 0);
    CHECK(exec_status(exe + " modes -o " + dir.string()) == 0);
    CHECK(fs::exists(dir / "modes.csv"));
    CHECK(exec_status(exe + " modes --set basis.nope=1") == 2);
    CHECK(exec_status(exe + " swap-calibrate --set dynamics.time_stop=0.1us -o " + dir.string()) == 3);
    CHECK(exec_status(exe + " --config " + (dir / "none.ini").string() + " modes") == 4);
    CHECK(exec_status("PQED_THREADS=2 " + exe + " modes -o " + dir.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "modes.manifest.json"));
    CHECK(j["threads"] == 2);
}

} // TEST_SUITE
