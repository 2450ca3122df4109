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

#include "pqed_tools/manifest.hpp"

#include <memory>

#include <json.hpp>
#include <openssl/evp.h>

#include "pqed/csv.hpp"
#include "pqed/errors.hpp"

namespace pqed::tools {

using nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw IoError("sha256: digest computation failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

FileDigest digest_file(const std::filesystem::path &path) {
    const std::string bytes = io::read_file(path);
    return {path.string(), sha256_hex(bytes), bytes.size()};
}

namespace {

ordered_json digests(const std::vector<FileDigest> &files) {
    ordered_json arr = ordered_json::array();
    for (const auto &f : files) {
        arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    return arr;
}

std::vector<FileDigest> read_digests(const ordered_json &arr) {
    std::vector<FileDigest> out;
    for (const auto &e : arr) {
        out.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>(),
                       e.at("bytes").get<std::size_t>()});
    }
    return out;
}

} // namespace

std::string manifest_to_json(const RunManifest &m) {
    ordered_json j;
    j["tool"] = "phonon-qed";
    j["tool_version"] = m.tool_version;
    j["subcommand"] = m.subcommand;
    j["preset"] = m.preset;
    ordered_json cfg = ordered_json::object();
    for (const auto &[section, keys] : resolved(m.config)) {
        ordered_json s = ordered_json::object();
        for (const auto &[k, v] : keys) {
            s[k] = v;
        }
        cfg[section] = s;
    }
    j["config"] = cfg;
    j["inputs"] = digests(m.inputs);
    j["outputs"] = digests(m.outputs);
    j["threads"] = m.threads;
    j["wall_time_s"] = m.wall_time_s;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error &e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    RunManifest m;
    try {
        m.tool_version = j.at("tool_version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.preset = j.value("preset", "");
        for (const auto &[section, keys] : j.at("config").items()) {
            for (const auto &[k, v] : keys.items()) {
                set_value(m.config, section, k, v.get<std::string>());
            }
        }
        m.inputs = read_digests(j.at("inputs"));
        m.outputs = read_digests(j.at("outputs"));
        m.threads = j.value("threads", 1);
        m.wall_time_s = j.value("wall_time_s", 0.0);
    } catch (const ordered_json::exception &e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

} // namespace pqed::tools
