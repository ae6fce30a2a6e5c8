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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "kgate/dynamics.hpp"
#include "kgate/models.hpp"
#include "kgate/objective.hpp"
#include "kgate/optimizer.hpp"

namespace kgate::cli {

/// Invalid configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::string field, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  /// Offending key, empty for whole-file problems.
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::string field_;
};

enum class ModelKind { hadamard, qft, custom };

/// Parsed run configuration. Relative paths are resolved against the
/// directory of the config file.
struct RunConfig {
  std::filesystem::path source;
  ModelKind model = ModelKind::hadamard;
  std::filesystem::path model_file;
  std::optional<std::filesystem::path> target_file;
  double t_final = 0.0;
  std::optional<std::size_t> n_steps;
  double lambda = 1.0;
  std::string shape = "paper-sin2-2pi";
  std::optional<std::filesystem::path> shape_file;
  std::optional<double> guess_omega;
  ObjectiveMode mode = ObjectiveMode::real_part();
  UpdateStyle update_style = UpdateStyle::incremental;
  std::size_t max_iterations = 5000;
  std::optional<double> j_tolerance;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;

  /// Normalized echo for report.json (paths as given, defaults filled).
  nlohmann::json echo() const;
};

/// Everything needed to run: model, target, grid and optimizer settings.
struct Problem {
  ModelAndTarget system;
  OptimizerConfig optimizer;
};

RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& source);
RunConfig load_run_config(const std::filesystem::path& path);

/// Builds models, target and guess; model or file errors become ConfigError.
Problem build_problem(const RunConfig& config);

std::string to_string(ModelKind kind);

}  // namespace kgate::cli
