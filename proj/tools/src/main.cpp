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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgate_cli/commands.hpp"
#include "kgate_cli/run_config.hpp"

namespace fs = std::filesystem;
using namespace kgate::cli;

namespace {

std::vector<fs::path> gather(const std::vector<std::string>& configs,
                             const std::string& manifest) {
  std::vector<fs::path> out(configs.begin(), configs.end());
  if (!manifest.empty()) {
    const auto listed = read_manifest(manifest);
    out.insert(out.end(), listed.begin(), listed.end());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgate: optimal-control gate synthesis for multilevel quantum systems"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string manifest;
  std::string out;
  std::string field;
  unsigned jobs = 1;
  bool quiet = false;
  bool hann = false;
  std::size_t pad = 1;

  auto* optimize = app.add_subcommand("optimize", "Optimize the field for one or more configs");
  optimize->add_option("--config", configs, "Run config (JSON); repeatable");
  optimize->add_option("--manifest", manifest, "File listing config paths, one per line")
      ->check(CLI::ExistingFile);
  optimize->add_option("--out", out, "Output directory (single config only)");
  optimize->add_option("--jobs", jobs, "Configs optimized in parallel")
      ->check(CLI::PositiveNumber);
  optimize->add_flag("--quiet", quiet, "No per-iteration progress");

  auto* simulate = app.add_subcommand("simulate", "Propagate a field and report gate metrics");
  simulate->add_option("--config", configs, "Run config (JSON)")->required()->expected(1);
  simulate->add_option("--field", field, "Field CSV (t, epsilon); default is the guess");
  simulate->add_option("--out", out, "Output directory");

  auto* spectrum = app.add_subcommand("spectrum", "Magnitude spectrum of a field CSV");
  spectrum->add_option("--field", field, "Field CSV (t, epsilon)")->required();
  spectrum->add_option("--out", out, "Output directory")->default_str(".");
  spectrum->add_flag("--hann", hann, "Apply a Hann window");
  spectrum->add_option("--pad", pad, "Zero-padding factor")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check configs without running");
  validate->add_option("--config", configs, "Run config (JSON); repeatable");
  validate->add_option("--manifest", manifest, "File listing config paths")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*optimize) {
      OptimizeOptions options;
      options.configs = gather(configs, manifest);
      if (!out.empty()) options.out = out;
      options.jobs = jobs;
      options.progress_every = quiet ? 0 : 50;
      return cmd_optimize(options, std::cerr);
    }
    if (*simulate) {
      return cmd_simulate(configs.front(),
                          field.empty() ? std::nullopt : std::optional<fs::path>(field),
                          out.empty() ? std::nullopt : std::optional<fs::path>(out), std::cerr);
    }
    if (*spectrum) {
      kgate::SpectrumOptions options;
      options.hann_window = hann;
      options.pad_factor = pad;
      return cmd_spectrum(field, out.empty() ? fs::path(".") : fs::path(out), options,
                          std::cerr);
    }
    if (*validate) return cmd_validate(gather(configs, manifest), std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
