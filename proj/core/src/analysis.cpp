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

#include "kgate/analysis.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kgate {

namespace {

// FFTW's planner is not thread-safe; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

Spectrum field_spectrum(const ControlField& field, const SpectrumOptions& options) {
  const std::size_t n = field.n_steps();
  if (n < 2) throw std::invalid_argument("field_spectrum: need at least two samples");
  if (options.pad_factor < 1) throw std::invalid_argument("field_spectrum: pad_factor must be >= 1");
  const std::size_t m = n * options.pad_factor;
  const std::size_t bins = m / 2 + 1;

  std::unique_ptr<double, FftwDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  std::unique_ptr<fftw_complex, FftwDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < m; ++k) {
    double v = 0.0;
    if (k < n) {
      v = field[k];
      if (options.hann_window) {
        const double c = std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(n));
        v *= c * c;
      }
    }
    in.get()[k] = v;
  }
  fftw_execute(plan.get());

  Spectrum spec;
  spec.frequencies.resize(bins);
  spec.magnitudes.resize(bins);
  const double dt = field.dt();
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t b = 0; b < bins; ++b) {
    const double re = out.get()[b][0];
    const double im = out.get()[b][1];
    double mag = std::hypot(re, im) * norm;
    const bool self_conjugate = b == 0 || (m % 2 == 0 && b == m / 2);
    if (!self_conjugate) mag *= std::numbers::sqrt2;
    spec.frequencies[b] = 2.0 * std::numbers::pi * static_cast<double>(b) /
                          (static_cast<double>(m) * dt);
    spec.magnitudes[b] = mag;
    spec.total_energy += mag * mag;
  }
  return spec;
}

double band_energy_fraction(const Spectrum& spectrum, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("band_energy_fraction: requires lo < hi");
  double in_band = 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < spectrum.magnitudes.size(); ++b) {
    const double e = spectrum.magnitudes[b] * spectrum.magnitudes[b];
    total += e;
    const double w = spectrum.frequencies[b];
    if (w >= lo && w <= hi) in_band += e;
  }
  if (total == 0.0) return 0.0;
  return std::min(1.0, in_band / total);
}

ConvergenceSummary convergence_summary(const std::vector<IterationRecord>& records,
                                       double fidelity_threshold,
                                       double monotonic_tolerance) {
  ConvergenceSummary s;
  if (records.empty()) return s;
  s.iterations = records.size();
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!s.iterations_to_threshold && records[k].fidelity >= fidelity_threshold) {
      s.iterations_to_threshold = records[k].iteration;
    }
    if (k > 0 && records[k].j < records[k - 1].j - monotonic_tolerance) {
      ++s.monotonicity_violations;
    }
  }
  s.final_fidelity = records.back().fidelity;
  s.final_leakage = records.back().leakage;
  s.final_j = records.back().j;
  return s;
}

ConvergenceSummary convergence_summary(const OptimizationReport& report,
                                       double fidelity_threshold,
                                       double monotonic_tolerance) {
  ConvergenceSummary s =
      convergence_summary(report.iterations, fidelity_threshold, monotonic_tolerance);
  if (!report.iterations.empty() &&
      report.iterations.front().j < report.initial.j - monotonic_tolerance) {
    ++s.monotonicity_violations;
  }
  return s;
}

}  // namespace kgate
