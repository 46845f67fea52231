// Copyright 2026 The signjoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIGNJOINT_MANIFEST_HPP
#define SIGNJOINT_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace signjoint::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes);

// Reproducibility sidecar written next to every output file: the exact
// command, flag snapshot, digests of the bytes actually read, seed and
// wall clock.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_digests;  // path -> sha256 hex
  std::uint64_t seed = 0;

  void record_input(const std::string& path, const std::string& bytes);
  std::string to_json() const;  // includes tool version and wall clock
  void write(const std::string& out_path) const;  // <out_path>.manifest.json
};

// Whole-file read/write with errors that name the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace signjoint::cli

#endif  // SIGNJOINT_MANIFEST_HPP
