// Copyright 2026 The latentshape Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lshape::cli {

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Runs the command line; returns the process exit code. Never throws.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args exclude argv[0]

/// Plain-text vectors: one vector per line, entries printed with %.17g.
void write_vectors(const std::filesystem::path& path,
                   const std::vector<Eigen::VectorXd>& rows);
std::vector<Eigen::VectorXd> read_vectors(const std::filesystem::path& path);

/// One record of a training manifest: `path identity pose sequence`, with
/// `-` for an absent sequence.
struct ManifestEntry {
  std::filesystem::path path;
  std::string identity;
  std::string pose;
  std::string sequence;
};

/// Blank lines and lines starting with '#' are skipped. Relative paths
/// resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace lshape::cli
