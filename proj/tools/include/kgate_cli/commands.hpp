// Copyright 2026 The kgate Authors
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

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "kgate/analysis.hpp"

namespace kgate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitMaxIterations = 3;
inline constexpr int kExitDiverged = 4;

inline constexpr int kReportSchema = 1;

struct OptimizeOptions {
  std::vector<std::filesystem::path> configs;
  /// Overrides output_dir; only allowed with a single config.
  std::optional<std::filesystem::path> out;
  unsigned jobs = 1;
  /// Progress line every this many iterations; 0 disables.
  std::size_t progress_every = 50;
};

/// Runs each config; returns the largest exit status.
int cmd_optimize(const OptimizeOptions& options, std::ostream& log);

/// Forward run of `field` (or the guess when absent) on the config's model.
int cmd_simulate(const std::filesystem::path& config,
                 const std::optional<std::filesystem::path>& field,
                 const std::optional<std::filesystem::path>& out, std::ostream& log);

int cmd_spectrum(const std::filesystem::path& field, const std::filesystem::path& out,
                 const SpectrumOptions& spectrum_options, std::ostream& log);

/// Parses and builds each config without running.
int cmd_validate(const std::vector<std::filesystem::path>& configs, std::ostream& log);

/// Reads a manifest: one config path per line, '#' comments, relative
/// paths resolved against the manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path);

}  // namespace kgate::cli
