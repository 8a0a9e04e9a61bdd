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


#include "fairmpc_cli/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "fairmpc/digest.hpp"
#include "fairmpc/error.hpp"

namespace fairmpc::cli {

namespace {

std::string digest_of(const std::filesystem::path& p) {
  if (std::filesystem::is_directory(p)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(p)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string joined;
    for (const auto& f : files) joined += f.filename().string() + ":" + sha256_file(f) + "\n";
    return sha256_hex({reinterpret_cast<const std::uint8_t*>(joined.data()), joined.size()});
  }
  return sha256_file(p);
}

std::string quoted(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t\"'\\") == std::string::npos) return arg;
  std::string out = "'";
  for (char c : arg) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest " + path.string());
  out << "command=" << command << "\n";
  if (!role.empty()) out << "role=" << role << "\n";
  out << "seed=" << seed << "\n";
  out << "argv=";
  for (std::size_t i = 0; i < argv.size(); ++i) out << (i ? " " : "") << quoted(argv[i]);
  out << "\n";
  for (const auto& [k, v] : config) out << "config." << k << "=" << v << "\n";
  for (const auto& [name, p] : inputs) {
    out << "input." << name << "=" << p.string() << "\n";
    out << "input." << name << ".sha256=" << digest_of(p) << "\n";
  }
  for (const auto& [name, p] : outputs) out << "output." << name << "=" << p.string() << "\n";
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest " + path.string());
}

void append_result(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& lines) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to manifest " + path.string());
  for (const auto& [k, v] : lines) out << "result." << k << "=" << v << "\n";
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read manifest " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "bad manifest line: " + line);
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace fairmpc::cli
