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
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgate/models.hpp"
#include "kgate/operators.hpp"

namespace kgate {

/// Propagation hit a numerical failure (non-finite sample, unitarity lost).
class PropagationError : public Error {
 public:
  using Error::Error;
};

/// Envelope s(t) >= 0 on [0, T] that multiplies every field correction.
class Shape {
 public:
  enum class Kind {
    sin2_2pi,  // sin^2(2 pi t / T), the default
    sin2_pi,   // sin^2(pi t / T)
    table,     // piecewise-linear through (t, s) points
  };

  static Shape sin2_2pi() { return Shape(Kind::sin2_2pi); }
  static Shape sin2_pi() { return Shape(Kind::sin2_pi); }
  /// Points must have strictly increasing t and s >= 0; values outside the
  /// tabulated range are 0.
  static Shape table(std::vector<std::pair<double, double>> points);

  Kind kind() const noexcept { return kind_; }
  /// Config-file name: "paper-sin2-2pi", "sin2-pi" or "table".
  std::string name() const;
  const std::vector<std::pair<double, double>>& points() const noexcept {
    return points_;
  }

  double operator()(double t, double t_final) const;

 private:
  explicit Shape(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::sin2_2pi;
  std::vector<std::pair<double, double>> points_;
};

/// Real field sampled at step midpoints t_k = (k + 1/2) dt, dt = T / n,
/// held constant over each step.
class ControlField {
 public:
  /// Throws std::invalid_argument on T <= 0, no samples, or a non-finite
  /// sample.
  ControlField(double t_final, std::vector<double> samples,
               Shape shape = Shape::sin2_2pi());

  static ControlField zero(double t_final, std::size_t n_steps,
                           Shape shape = Shape::sin2_2pi());

  double t_final() const noexcept { return t_final_; }
  std::size_t n_steps() const noexcept { return samples_.size(); }
  double dt() const noexcept { return t_final_ / static_cast<double>(n_steps()); }
  double midpoint(std::size_t k) const noexcept {
    return (static_cast<double>(k) + 0.5) * dt();
  }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t k) const { return samples_[k]; }
  const Shape& shape() const noexcept { return shape_; }
  /// s(t_k) at the k-th midpoint.
  double shape_at(std::size_t k) const { return shape_(midpoint(k), t_final_); }

  /// Same grid and shape, new samples.
  ControlField with_samples(std::vector<double> samples) const;

 private:
  double t_final_;
  std::vector<double> samples_;
  Shape shape_;
};

/// Eigendecompositions of H(eps_k) for every step of a field; lets a
/// trajectory and its costate reuse the same step kernels.
class StepKernels {
 public:
  StepKernels() = default;
  StepKernels(const ModelSystem& model, const ControlField& field);
  explicit StepKernels(std::vector<HermitianSpectrum> steps)
      : steps_(std::move(steps)) {}

  std::size_t size() const noexcept { return steps_.size(); }
  const HermitianSpectrum& operator[](std::size_t k) const { return steps_[k]; }

 private:
  std::vector<HermitianSpectrum> steps_;
};

struct PropagationOptions {
  /// Checkpoint stride; 0 picks 1 up to kFullStorageLimit steps and thins
  /// above that.
  std::size_t stride = 0;
  /// Unitarity is verified every `check_every` steps and at the end.
  std::size_t check_every = 100;
  double unitarity_tolerance = 1e-8;
  /// Precomputed kernels for exactly this (model, field); optional.
  const StepKernels* kernels = nullptr;

  static constexpr std::size_t kFullStorageLimit = 20000;
};

enum class Direction { forward, backward };

/// Operators on the grid t_j = j dt, j = 0..n. Every `stride`-th grid point
/// is stored (always including 0 and n); other points are recomputed from
/// the nearest stored one on request.
class Trajectory {
 public:
  Direction direction() const noexcept { return direction_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t stride() const noexcept { return stride_; }
  std::size_t checkpoint_count() const noexcept { return stored_.size(); }
  /// Grid index of the i-th stored checkpoint.
  std::size_t checkpoint_index(std::size_t i) const;
  const CMatrix& checkpoint(std::size_t i) const { return stored_[i]; }

  /// Operator at grid point j (0 <= j <= n).
  CMatrix at(std::size_t j) const;
  /// U(T) for forward, B(0) for backward.
  const CMatrix& final_operator() const;
  /// U(0) for forward, B(T) for backward.
  const CMatrix& initial_operator() const;

 private:
  friend Trajectory propagate_forward(const ModelSystem&, const ControlField&,
                                      const PropagationOptions&);
  friend Trajectory propagate_backward(const ModelSystem&, const ControlField&,
                                       const Operator&,
                                       const PropagationOptions&);

  struct Context;

  Direction direction_ = Direction::forward;
  std::size_t n_steps_ = 0;
  std::size_t stride_ = 1;
  std::vector<CMatrix> stored_;
  std::shared_ptr<const Context> context_;
};


/// U_{k+1} = exp(-i (h0 - mu eps_k) dt) U_k from U_0 = 1.
Trajectory propagate_forward(const ModelSystem& model, const ControlField& field,
                             const PropagationOptions& options = {});

/// B_k = B_{k+1} exp(-i (h0 - mu eps_k) dt) from B_n = b_terminal, i.e.
/// dB/dt = i B H integrated from T down to 0.
Trajectory propagate_backward(const ModelSystem& model, const ControlField& field,
                              const Operator& b_terminal,
                              const PropagationOptions& options = {});

/// U(T) only; no storage beyond the running product.
CMatrix propagate_final(const ModelSystem& model, const ControlField& field,
                        const PropagationOptions& options = {});

/// Grid size giving `steps_per_period` steps per period of the fastest
/// transition of h0 (its spectral width): ceil(steps * T * width / 2 pi).
std::size_t default_n_steps(const ModelSystem& model, double t_final,
                            double steps_per_period = 100.0);

}  // namespace kgate
