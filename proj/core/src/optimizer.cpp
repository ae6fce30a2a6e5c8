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

#include "kgate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kgate {

std::string to_string(UpdateStyle style) {
  return style == UpdateStyle::direct ? "direct" : "incremental";
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged:
      return "converged";
    case RunStatus::max_iterations:
      return "max-iterations";
    case RunStatus::diverged:
      return "diverged";
  }
  return "unknown";
}

void OptimizerConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (j_tolerance && (!(*j_tolerance >= 0.0) || !std::isfinite(*j_tolerance))) {
    throw std::invalid_argument("j_tolerance must be non-negative and finite");
  }
  if (max_lambda_doublings < 0) {
    throw std::invalid_argument("max_lambda_doublings must be >= 0");
  }
  if (!(monotonic_tolerance >= 0.0)) {
    throw std::invalid_argument("monotonic_tolerance must be >= 0");
  }
}

namespace {

CMatrix register_rows(const CMatrix& b, std::span<const Index> registers) {
  CMatrix rows(static_cast<Index>(registers.size()), b.cols());
  for (std::size_t i = 0; i < registers.size(); ++i) {
    rows.row(static_cast<Index>(i)) = b.row(registers[i]);
  }
  return rows;
}

// Im sum_i (W U)_{i, r_i}
double restricted_trace_imag(const CMatrix& w, const CMatrix& u,
                             std::span<const Index> registers) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < registers.size(); ++i) {
    acc += w.row(static_cast<Index>(i)).transpose().cwiseProduct(
               u.col(registers[i])).sum();
  }
  return acc.imag();
}

std::vector<double> shape_samples(const Shape& shape, const ControlField& field) {
  std::vector<double> s(field.n_steps());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = shape(field.midpoint(k), field.t_final());
  }
  return s;
}

// Given the costate rows at grid point k+1 and the step-k kernel of the
// previous field, returns rows B_{k+1} E^{1/2} mu E^{1/2} and overwrites
// `rows` with B_k = B_{k+1} E.
CMatrix midpoint_costate_step(const HermitianSpectrum& kernel, const CMatrix& mu,
                              double dt, CMatrix& rows) {
  const CMatrix x = kernel.to_eigenbasis_right(rows);
  const CMatrix b_mid = kernel.from_eigenbasis_right(x * kernel.phases(0.5 * dt).asDiagonal());
  CMatrix w = b_mid * mu;
  kernel.apply_right(0.5 * dt, w);
  rows = kernel.from_eigenbasis_right(x * kernel.phases(dt).asDiagonal());
  return w;
}

// Backward sweep over cached kernels; only the register rows of B are
// carried because only they enter the restricted trace.
void backward_sweep(const ModelSystem& model, const GateTarget& target,
                    const ObjectiveMode& mode, const StepKernels& kernels,
                    double dt, std::vector<CMatrix>& midpoints) {
  CMatrix rows = mode.weight() *
                 register_rows(target.b_terminal().matrix(), target.registers());
  const CMatrix& mu = model.mu().matrix();
  midpoints.resize(kernels.size());
  for (std::size_t k = kernels.size(); k-- > 0;) {
    midpoints[k] = midpoint_costate_step(kernels[k], mu, dt, rows);
  }
}

struct SweepOutcome {
  std::vector<double> samples;
  std::vector<HermitianSpectrum> kernels;
  CMatrix u_final;
};

SweepOutcome forward_sweep(const ModelSystem& model,
                           std::span<const Index> registers,
                           const std::vector<CMatrix>& midpoints,
                           const ControlField& field_prev,
                           const std::vector<double>& shape, double lambda,
                           UpdateStyle style) {
  const std::size_t n = field_prev.n_steps();
  const double dt = field_prev.dt();
  SweepOutcome out;
  out.samples.resize(n);
  out.kernels.reserve(n);
  CMatrix u = CMatrix::Identity(model.dim(), model.dim());
  for (std::size_t k = 0; k < n; ++k) {
    const double s = shape[k];
    double delta = 0.0;
    if (s != 0.0) {
      delta = -(s / (2.0 * lambda)) * restricted_trace_imag(midpoints[k], u, registers);
    }
    if (!std::isfinite(delta)) {
      std::ostringstream os;
      os << "non-finite field correction at step " << k
         << " (lambda too small or unstable update)";
      throw PropagationError(os.str());
    }
    const double eps = style == UpdateStyle::incremental ? field_prev[k] + delta : delta;
    out.samples[k] = eps;
    out.kernels.push_back(model.step_spectrum(eps));
    out.kernels.back().apply_left(dt, u);
  }
  const double defect = unitarity_defect(u);
  if (!(defect <= 1e-8)) {
    std::ostringstream os;
    os << "forward sweep lost unitarity: defect " << defect;
    throw PropagationError(os.str());
  }
  out.u_final = std::move(u);
  return out;
}

IterationRecord make_record(std::size_t iteration, const GateTarget& target,
                            const CMatrix& u, const ControlField& field,
                            const Shape& shape, const ObjectiveMode& mode,
                            double lambda) {
  const ObjectiveValue v = evaluate_objective(target, u, target.registers(), mode);
  IterationRecord r;
  r.iteration = iteration;
  r.j = v.j;
  r.tau = v.tau;
  r.tau_abs = std::abs(v.tau);
  r.fidelity = v.fidelity;
  r.leakage = leakage(u, target.registers());
  r.field_energy = field_energy(field, shape);
  r.lambda = lambda;
  return r;
}

void check_dims(const ModelSystem& model, const GateTarget& target) {
  if (target.b_terminal().dim() != model.dim()) {
    throw DimensionError("target and model dimensions differ");
  }
  if (!std::equal(target.registers().begin(), target.registers().end(),
                  model.registers().begin(), model.registers().end())) {
    throw DimensionError("target registers differ from the model registers");
  }
}

}  // namespace

double field_energy(const ControlField& field, const Shape& shape) {
  double e = 0.0;
  for (std::size_t k = 0; k < field.n_steps(); ++k) {
    const double s = shape(field.midpoint(k), field.t_final());
    if (s > 0.0) e += field[k] * field[k] / s;
  }
  return e * field.dt();
}

ControlField guess_field(double t_final, std::size_t n_steps, double omega,
                         const Shape& shape) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("guess_field: omega must be positive");
  }
  if (n_steps == 0) throw std::invalid_argument("guess_field: n_steps must be >= 1");
  const double dt = t_final / static_cast<double>(n_steps);
  std::vector<double> samples(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    samples[k] = shape(t, t_final) * std::cos(omega * t);
  }
  return ControlField(t_final, std::move(samples), shape);
}

double field_correction(const Operator& b_t, const Operator& mu,
                        const Operator& u_t, double s_t, double lambda) {
  if (b_t.dim() != mu.dim() || mu.dim() != u_t.dim()) {
    throw DimensionError("field_correction: dimension mismatch");
  }
  if (s_t == 0.0) return 0.0;
  const Complex tr = (b_t.matrix() * mu.matrix() * u_t.matrix()).trace();
  return -(s_t / (2.0 * lambda)) * tr.imag();
}

double field_correction(const Operator& b_t, const Operator& mu,
                        const Operator& u_t, double s_t, double lambda,
                        std::span<const Index> registers) {
  if (b_t.dim() != mu.dim() || mu.dim() != u_t.dim()) {
    throw DimensionError("field_correction: dimension mismatch");
  }
  for (Index r : registers) {
    if (r < 0 || r >= b_t.dim()) throw DimensionError("field_correction: register out of range");
  }
  if (s_t == 0.0) return 0.0;
  const CMatrix w = register_rows(b_t.matrix(), registers) * mu.matrix();
  return -(s_t / (2.0 * lambda)) * restricted_trace_imag(w, u_t.matrix(), registers);
}

std::vector<double> objective_gradient(const ModelSystem& model,
                                       const GateTarget& target,
                                       const ControlField& field,
                                       const ObjectiveMode& mode) {
  check_dims(model, target);
  const StepKernels kernels(model, field);
  const double dt = field.dt();
  std::vector<CMatrix> midpoints;
  backward_sweep(model, target, mode, kernels, dt, midpoints);

  std::vector<double> grad(field.n_steps());
  CMatrix u = CMatrix::Identity(model.dim(), model.dim());
  for (std::size_t k = 0; k < field.n_steps(); ++k) {
    grad[k] = -dt * restricted_trace_imag(midpoints[k], u, target.registers());
    kernels[k].apply_left(dt, u);
  }
  return grad;
}

KrotovStep krotov_iteration(const ModelSystem& model, const GateTarget& target,
                            const ControlField& field_prev,
                            const Trajectory& b_prev,
                            const OptimizerConfig& config) {
  config.validate();
  check_dims(model, target);
  if (b_prev.direction() != Direction::backward ||
      b_prev.n_steps() != field_prev.n_steps()) {
    throw std::invalid_argument("krotov_iteration: costate trajectory does not match field");
  }
  const double dt = field_prev.dt();
  const CMatrix& mu = model.mu().matrix();
  const Complex w = config.mode.weight();

  std::vector<CMatrix> midpoints(field_prev.n_steps());
  for (std::size_t k = 0; k < field_prev.n_steps(); ++k) {
    CMatrix rows = w * register_rows(b_prev.at(k + 1), target.registers());
    midpoints[k] = midpoint_costate_step(model.step_spectrum(field_prev[k]), mu,
                                         dt, rows);
  }
  SweepOutcome out =
      forward_sweep(model, target.registers(), midpoints, field_prev,
                    shape_samples(config.shape, field_prev), config.lambda,
                    config.update_style);
  ControlField field(field_prev.t_final(), std::move(out.samples), config.shape);
  const StepKernels kernels(std::move(out.kernels));
  PropagationOptions options;
  options.kernels = &kernels;
  Trajectory forward = propagate_forward(model, field, options);
  return {std::move(field), std::move(forward)};
}

OptimizationReport optimize(const ModelSystem& model, const GateTarget& target,
                            const OptimizerConfig& config,
                            const IterationObserver& observer) {
  config.validate();
  check_dims(model, target);
  const double nr = static_cast<double>(target.register_dim());
  const double j_tolerance = config.j_tolerance.value_or(1e-6 * nr);
  const double divergence_threshold = 1e-6 * nr;

  ControlField field(config.guess.t_final(),
                     std::vector<double>(config.guess.samples().begin(),
                                         config.guess.samples().end()),
                     config.shape);
  const double dt = field.dt();
  const std::vector<double> shape = shape_samples(config.shape, field);

  StepKernels kernels(model, field);
  PropagationOptions options;
  options.kernels = &kernels;
  CMatrix u_final = propagate_final(model, field, options);
  double lambda = config.lambda;

  OptimizationReport report{
      make_record(0, target, u_final, field, config.shape, config.mode, lambda),
      {},
      field,
      u_final,
      RunStatus::max_iterations};
  double j_prev = report.initial.j;

  std::vector<CMatrix> midpoints;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    try {
      backward_sweep(model, target, config.mode, kernels, dt, midpoints);

      std::optional<SweepOutcome> accepted;
      double j_new = 0.0;
      double worst_decrease = 0.0;
      int backoffs = 0;
      for (;;) {
        SweepOutcome out = forward_sweep(model, target.registers(), midpoints,
                                         field, shape, lambda, config.update_style);
        j_new = config.mode.apply(
            tau_restricted(target, out.u_final, target.registers()));
        const double decrease = j_prev - j_new;
        if (config.update_style == UpdateStyle::direct ||
            decrease <= config.monotonic_tolerance) {
          accepted = std::move(out);
          break;
        }
        worst_decrease = decrease;
        if (backoffs == config.max_lambda_doublings) break;
        lambda *= 2.0;
        ++backoffs;
      }

      if (!accepted) {
        // No lambda in reach improves J: stalled at a numerical optimum, or
        // diverging if the loss is not negligible.
        report.status = worst_decrease > divergence_threshold ? RunStatus::diverged
                                                              : RunStatus::converged;
        return report;
      }

      field = ControlField(field.t_final(), std::move(accepted->samples), config.shape);
      kernels = StepKernels(std::move(accepted->kernels));
      u_final = std::move(accepted->u_final);

      IterationRecord record =
          make_record(it, target, u_final, field, config.shape, config.mode, lambda);
      record.backoffs = backoffs;
      report.iterations.push_back(record);
      report.final_field = field;
      report.final_u = u_final;
      if (observer) observer(report.iterations.back());

      const double gain = j_new - j_prev;
      j_prev = j_new;
      if (std::abs(gain) < j_tolerance) {
        report.status = RunStatus::converged;
        return report;
      }
    } catch (const PropagationError& e) {
      std::ostringstream os;
      os << "iteration " << it << ": " << e.what();
      throw PropagationError(os.str());
    }
  }
  report.status = RunStatus::max_iterations;
  return report;
}

double suggest_lambda(const ModelSystem& model, const GateTarget& target,
                      const ControlField& guess, const Shape& shape,
                      const ObjectiveMode& mode, double fraction) {
  check_dims(model, target);
  if (!(fraction > 0.0)) throw std::invalid_argument("suggest_lambda: fraction must be positive");
  const StepKernels kernels(model, guess);
  const double dt = guess.dt();
  std::vector<CMatrix> midpoints;
  backward_sweep(model, target, mode, kernels, dt, midpoints);
  double max_corr = 0.0;
  double max_guess = 0.0;
  CMatrix u = CMatrix::Identity(model.dim(), model.dim());
  for (std::size_t k = 0; k < guess.n_steps(); ++k) {
    const double s = shape(guess.midpoint(k), guess.t_final());
    const double c = 0.5 * s * restricted_trace_imag(midpoints[k], u, target.registers());
    max_corr = std::max(max_corr, std::abs(c));
    max_guess = std::max(max_guess, std::abs(guess[k]));
    kernels[k].apply_left(dt, u);
  }
  if (max_guess == 0.0 || max_corr == 0.0) return 1.0;
  return max_corr / (fraction * max_guess);
}

}  // namespace kgate
