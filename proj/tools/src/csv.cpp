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

#include "kgate_cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kgate::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

CsvTable read_csv(const fs::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!have_header) {
      if (cells.size() != columns) {
        throw CsvError(where + ": header must have " + std::to_string(columns) + " columns");
      }
      table.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != columns) {
      throw CsvError(where + ": expected " + std::to_string(columns) + " columns, found " +
                     std::to_string(cells.size()));
    }
    std::vector<double> row(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      const std::string& cell = cells[c];
      const char* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, row[c]);
      if (ec != std::errc() || ptr != end || !std::isfinite(row[c])) {
        throw CsvError(where + ": '" + cell + "' is not a finite number");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw CsvError(path.string() + ": empty file");
  return table;
}

void write_field_csv(const fs::path& path, const ControlField& field) {
  auto out = open_out(path);
  out << "t,epsilon\n";
  for (std::size_t k = 0; k < field.n_steps(); ++k) {
    out << format_double(field.midpoint(k)) << ',' << format_double(field[k]) << '\n';
  }
}

void write_convergence_csv(const fs::path& path, const OptimizationReport& report) {
  auto out = open_out(path);
  out << "iter,J,tau_abs,fidelity,leakage\n";
  auto row = [&](const IterationRecord& r) {
    out << r.iteration << ',' << format_double(r.j) << ',' << format_double(r.tau_abs) << ','
        << format_double(r.fidelity) << ',' << format_double(r.leakage) << '\n';
  };
  row(report.initial);
  for (const auto& r : report.iterations) row(r);
}

void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum) {
  auto out = open_out(path);
  out << "omega,magnitude\n";
  for (std::size_t b = 0; b < spectrum.frequencies.size(); ++b) {
    out << format_double(spectrum.frequencies[b]) << ','
        << format_double(spectrum.magnitudes[b]) << '\n';
  }
}

FieldSamples read_field_csv(const fs::path& path) {
  const CsvTable table = read_csv(path, 2);
  FieldSamples s;
  s.t.reserve(table.rows.size());
  s.epsilon.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    s.t.push_back(row[0]);
    s.epsilon.push_back(row[1]);
  }
  return s;
}

ControlField field_on_grid(const FieldSamples& samples, const ControlField& reference) {
  const std::size_t n = reference.n_steps();
  if (samples.epsilon.size() != n) {
    throw CsvError("field has " + std::to_string(samples.epsilon.size()) +
                   " rows but the config grid has " + std::to_string(n) + " steps");
  }
  const double tol = 1e-9 * reference.dt();
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(samples.t[k] - reference.midpoint(k)) > tol) {
      std::ostringstream os;
      os << "field row " << k << " has t = " << format_double(samples.t[k])
         << " but the grid midpoint is " << format_double(reference.midpoint(k));
      throw CsvError(os.str());
    }
  }
  return reference.with_samples(samples.epsilon);
}

ControlField field_from_samples(const FieldSamples& samples) {
  const std::size_t n = samples.t.size();
  if (n < 2) throw CsvError("field needs at least two rows");
  const double dt = (samples.t.back() - samples.t.front()) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw CsvError("time column must be increasing");
  for (std::size_t k = 1; k < n; ++k) {
    const double step = samples.t[k] - samples.t[k - 1];
    if (std::abs(step - dt) > 1e-6 * dt) {
      throw CsvError("time column is not uniformly spaced at row " + std::to_string(k));
    }
  }
  return ControlField(dt * static_cast<double>(n), samples.epsilon);
}

}  // namespace kgate::cli
