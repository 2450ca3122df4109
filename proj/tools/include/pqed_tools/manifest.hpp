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

#include <filesystem>
#include <string>
#include <vector>

#include "pqed_tools/config.hpp"

namespace pqed::tools {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

struct FileDigest {
    std::string path;
    std::string sha256;
    std::size_t bytes = 0;
};

FileDigest digest_file(const std::filesystem::path &path);

struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    std::string preset;
    RunConfig config;
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
    double wall_time_s = 0.0;
    int threads = 1;
};

/// JSON with the resolved configuration (every key, canonical values).
std::string manifest_to_json(const RunManifest &m);

/// Reads a manifest; the configuration is rebuilt from its resolved keys.
RunManifest manifest_from_json(std::string_view text);

} // namespace pqed::tools
