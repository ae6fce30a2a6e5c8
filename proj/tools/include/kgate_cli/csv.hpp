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

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgate/analysis.hpp"
#include "kgate/dynamics.hpp"
#include "kgate/optimizer.hpp"

namespace kgate::cli {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric table with one header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Every data row must have `columns` finite numbers.
CsvTable read_csv(const std::filesystem::path& path, std::size_t columns);

/// 17 significant digits.
std::string format_double(double v);

void write_field_csv(const std::filesystem::path& path, const ControlField& field);
void write_convergence_csv(const std::filesystem::path& path,
                           const OptimizationReport& report);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

/// (t, epsilon) samples from a field CSV.
struct FieldSamples {
  std::vector<double> t;
  std::vector<double> epsilon;
};

FieldSamples read_field_csv(const std::filesystem::path& path);

/// Field on the grid of `reference`; throws CsvError when the row count or
/// the time column does not match its midpoints.
ControlField field_on_grid(const FieldSamples& samples, const ControlField& reference);

/// Field on a uniform grid inferred from the time column.
ControlField field_from_samples(const FieldSamples& samples);

}  // namespace kgate::cli
