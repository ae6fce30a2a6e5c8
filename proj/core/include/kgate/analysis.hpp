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
#include <optional>
#include <vector>

#include "kgate/dynamics.hpp"
#include "kgate/optimizer.hpp"

namespace kgate {

/// One-sided magnitude spectrum of a sampled field.
///
/// With X_m = sum_k w_k eps_k exp(-2 pi i m k / M) (M = padded length,
/// w = window) the magnitudes are |X_m| / sqrt(M), doubled in power for the
/// bins that stand for both +m and -m, so that
/// sum_m magnitude_m^2 = sum_k (w_k eps_k)^2. Frequencies are angular,
/// omega_m = 2 pi m / (M dt), covering [0, pi/dt].
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<double> magnitudes;
  /// sum of magnitude^2 (equals the sample energy sum_k eps_k^2).
  double total_energy = 0.0;
};

struct SpectrumOptions {
  bool hann_window = false;
  /// Zero padding factor (>= 1). Interpolates the display only; it adds no
  /// resolution beyond 2 pi / T.
  std::size_t pad_factor = 1;
};

/// Requires n_steps >= 2.
Spectrum field_spectrum(const ControlField& field, const SpectrumOptions& options = {});

/// Energy in bins with lo <= omega <= hi over the total; 0 for a zero
/// field. Requires lo < hi.
double band_energy_fraction(const Spectrum& spectrum, double lo, double hi);

struct ConvergenceSummary {
  std::optional<std::size_t> iterations;
  /// First iteration whose fidelity reached the threshold.
  std::optional<std::size_t> iterations_to_threshold;
  std::optional<double> final_fidelity;
  std::optional<double> final_leakage;
  std::optional<double> final_j;
  /// Consecutive pairs with J_k < J_{k-1} - tolerance.
  std::size_t monotonicity_violations = 0;
};

/// Summarizes the accepted iterations of a report (the guess-field record
/// is not counted as an iteration but is the reference for the first
/// monotonicity comparison).
ConvergenceSummary convergence_summary(const OptimizationReport& report,
                                       double fidelity_threshold = 0.99,
                                       double monotonic_tolerance = 1e-10);

/// Same, on a bare list of per-iteration records.
ConvergenceSummary convergence_summary(const std::vector<IterationRecord>& records,
                                       double fidelity_threshold = 0.99,
                                       double monotonic_tolerance = 1e-10);

}  // namespace kgate
