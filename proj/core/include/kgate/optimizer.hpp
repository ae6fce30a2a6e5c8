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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgate/dynamics.hpp"
#include "kgate/models.hpp"
#include "kgate/objective.hpp"

namespace kgate {

enum class UpdateStyle {
  /// eps^(k) = delta eps^(k): the field equation used as is.
  direct,
  /// eps^(k) = eps^(k-1) + delta eps^(k): monotone in J for large enough
  /// lambda.
  incremental,
};

std::string to_string(UpdateStyle style);

enum class RunStatus { converged, max_iterations, diverged };

std::string to_string(RunStatus status);

struct OptimizerConfig {
  explicit OptimizerConfig(ControlField guess_field)
      : guess(std::move(guess_field)), shape(guess.shape()) {}

  ControlField guess;
  /// Penalty weight on the field energy; sets the update step size.
  double lambda = 1.0;
  /// Envelope applied to every correction. Defaults to the guess's shape.
  Shape shape;
  std::size_t max_iterations = 5000;
  /// Stop when an iteration improves J by less than this; unset means
  /// 1e-6 * N_R.
  std::optional<double> j_tolerance;
  ObjectiveMode mode = ObjectiveMode::real_part();
  UpdateStyle update_style = UpdateStyle::incremental;
  /// Incremental mode: on a decrease of J larger than monotonic_tolerance
  /// lambda is doubled and the sweep retried, at most this many times.
  int max_lambda_doublings = 10;
  double monotonic_tolerance = 1e-10;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double j = 0.0;
  Complex tau;
  double tau_abs = 0.0;
  double fidelity = 0.0;
  double leakage = 0.0;
  /// integral of eps^2 / s over points with s > 0.
  double field_energy = 0.0;
  double lambda = 0.0;
  /// Lambda doublings spent on this iteration.
  int backoffs = 0;
};

struct OptimizationReport {
  /// Metrics of the guess field (iteration 0).
  IterationRecord initial;
  std::vector<IterationRecord> iterations;
  ControlField final_field;
  CMatrix final_u;
  RunStatus status = RunStatus::max_iterations;
};

/// Receives each accepted iteration, in order, on the optimizing thread.
using IterationObserver = std::function<void(const IterationRecord&)>;

/// eps0(t_k) = s(t_k) cos(omega t_k) at the midpoints.
ControlField guess_field(double t_final, std::size_t n_steps, double omega,
                         const Shape& shape = Shape::sin2_2pi());

/// -(s / 2 lambda) Im Tr{B mu U}   (hbar = 1)
double field_correction(const Operator& b_t, const Operator& mu,
                        const Operator& u_t, double s_t, double lambda);

/// As above with the trace restricted to the register levels:
/// -(s / 2 lambda) Im sum_i <r_i| B mu U |r_i>.
double field_correction(const Operator& b_t, const Operator& mu,
                        const Operator& u_t, double s_t, double lambda,
                        std::span<const Index> registers);

/// dJ/d eps_k for every sample: -dt Im Tr_R{w B(t_k) mu U(t_k)} with B
/// propagated from the terminal condition and both operators taken at the
/// step midpoint under the given field (w = mode weight).
std::vector<double> objective_gradient(const ModelSystem& model,
                                       const GateTarget& target,
                                       const ControlField& field,
                                       const ObjectiveMode& mode =
                                           ObjectiveMode::real_part());

struct KrotovStep {
  ControlField field;
  Trajectory forward;
};

/// One forward sweep with concurrent field update. `b_prev` must be the
/// backward trajectory computed from target.b_terminal() under `field_prev`.
/// Uses config.lambda as is (no backoff).
KrotovStep krotov_iteration(const ModelSystem& model, const GateTarget& target,
                            const ControlField& field_prev,
                            const Trajectory& b_prev,
                            const OptimizerConfig& config);

/// Full loop: backward costate sweep, forward update sweep, repeat until
/// the improvement drops below j_tolerance or max_iterations is reached.
/// Propagation failures are rethrown as PropagationError naming the
/// iteration.
OptimizationReport optimize(const ModelSystem& model, const GateTarget& target,
                            const OptimizerConfig& config,
                            const IterationObserver& observer = {});

/// Lambda that makes the largest first incremental correction equal to
/// `fraction` of the largest guess sample (first-order estimate).
double suggest_lambda(const ModelSystem& model, const GateTarget& target,
                      const ControlField& guess, const Shape& shape,
                      const ObjectiveMode& mode = ObjectiveMode::real_part(),
                      double fraction = 0.1);

/// sum_k eps_k^2 / s_k dt over steps with s_k > 0.
double field_energy(const ControlField& field, const Shape& shape);

}  // namespace kgate
