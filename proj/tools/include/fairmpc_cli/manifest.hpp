/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Run manifests: line-delimited key=value text written before a protocol
// starts and completed with the outcome afterwards. The argv line makes a run
// replayable; input digests pin every consumed file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fairmpc::cli {

struct RunManifest {
  std::string command;
  std::string role;  // empty for single-process commands
  std::uint64_t seed = 0;
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> config;
  // name -> path; digests are computed when the manifest is written.
  std::vector<std::pair<std::string, std::filesystem::path>> inputs;
  std::vector<std::pair<std::string, std::filesystem::path>> outputs;

  void set(const std::string& key, const std::string& value) { config.emplace_back(key, value); }
  void input(const std::string& name, const std::filesystem::path& p) { inputs.emplace_back(name, p); }
  void output(const std::string& name, const std::filesystem::path& p) { outputs.emplace_back(name, p); }

  // Directories are digested file by file in name order.
  void write(const std::filesystem::path& path) const;
};

// Appends result lines (status, transcript digest, ...) to a written manifest.
void append_result(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& lines);

// Parses a manifest back into key/value pairs, in file order.
std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& path);

}  // namespace fairmpc::cli
