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

#include "kgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kgate {

Shape Shape::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("shape table needs at least two points");
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [t, s] = points[k];
    if (!std::isfinite(t) || !std::isfinite(s) || s < 0.0) {
      throw std::invalid_argument("shape table: entries must be finite with s >= 0");
    }
    if (k > 0 && !(t > points[k - 1].first)) {
      throw std::invalid_argument("shape table: t must be strictly increasing");
    }
  }
  Shape shape(Kind::table);
  shape.points_ = std::move(points);
  return shape;
}

std::string Shape::name() const {
  switch (kind_) {
    case Kind::sin2_2pi:
      return "paper-sin2-2pi";
    case Kind::sin2_pi:
      return "sin2-pi";
    case Kind::table:
      return "table";
  }
  return "unknown";
}

double Shape::operator()(double t, double t_final) const {
  switch (kind_) {
    case Kind::sin2_2pi: {
      const double v = std::sin(2.0 * std::numbers::pi * t / t_final);
      return v * v;
    }
    case Kind::sin2_pi: {
      const double v = std::sin(std::numbers::pi * t / t_final);
      return v * v;
    }
    case Kind::table: {
      if (t < points_.front().first || t > points_.back().first) return 0.0;
      auto hi = std::upper_bound(
          points_.begin(), points_.end(), t,
          [](double value, const auto& p) { return value < p.first; });
      if (hi == points_.end()) return points_.back().second;
      auto lo = hi - 1;
      const double w = (t - lo->first) / (hi->first - lo->first);
      return (1.0 - w) * lo->second + w * hi->second;
    }
  }
  return 0.0;
}

ControlField::ControlField(double t_final, std::vector<double> samples,
                           Shape shape)
    : t_final_(t_final), samples_(std::move(samples)), shape_(std::move(shape)) {
  if (!(t_final_ > 0.0) || !std::isfinite(t_final_)) {
    throw std::invalid_argument("control field: t_final must be positive");
  }
  if (samples_.empty()) {
    throw std::invalid_argument("control field: n_steps must be >= 1");
  }
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!std::isfinite(samples_[k])) {
      std::ostringstream os;
      os << "control field: sample " << k << " is not finite";
      throw std::invalid_argument(os.str());
    }
  }
}

ControlField ControlField::zero(double t_final, std::size_t n_steps, Shape shape) {
  return ControlField(t_final, std::vector<double>(n_steps, 0.0), std::move(shape));
}

ControlField ControlField::with_samples(std::vector<double> samples) const {
  if (samples.size() != samples_.size()) {
    throw std::invalid_argument("control field: sample count changed");
  }
  return ControlField(t_final_, std::move(samples), shape_);
}

StepKernels::StepKernels(const ModelSystem& model, const ControlField& field) {
  steps_.reserve(field.n_steps());
  for (double eps : field.samples()) steps_.push_back(model.step_spectrum(eps));
}

struct Trajectory::Context {
  ModelSystem model;
  ControlField field;
};

std::size_t Trajectory::checkpoint_index(std::size_t i) const {
  return std::min(i * stride_, n_steps_);
}

const CMatrix& Trajectory::final_operator() const {
  return direction_ == Direction::forward ? stored_.back() : stored_.front();
}

const CMatrix& Trajectory::initial_operator() const {
  return direction_ == Direction::forward ? stored_.front() : stored_.back();
}

CMatrix Trajectory::at(std::size_t j) const {
  if (j > n_steps_) throw std::out_of_range("trajectory: grid index out of range");
  const double dt = context_->field.dt();
  if (direction_ == Direction::forward) {
    const std::size_t i = j / stride_;
    std::size_t g = checkpoint_index(i);
    CMatrix u = stored_[i];
    for (; g < j; ++g) {
      context_->model.step_spectrum(context_->field[g]).apply_left(dt, u);
    }
    return u;
  }
  std::size_t i = (j + stride_ - 1) / stride_;
  i = std::min(i, stored_.size() - 1);
  std::size_t g = checkpoint_index(i);
  CMatrix b = stored_[i];
  for (; g > j; --g) {
    context_->model.step_spectrum(context_->field[g - 1]).apply_right(dt, b);
  }
  return b;
}

namespace {

std::size_t resolve_stride(const PropagationOptions& options, std::size_t n) {
  if (options.stride > 0) return options.stride;
  if (n <= PropagationOptions::kFullStorageLimit) return 1;
  return (n + PropagationOptions::kFullStorageLimit - 1) /
         PropagationOptions::kFullStorageLimit;
}

void check_kernels(const PropagationOptions& options, const ControlField& field) {
  if (options.kernels != nullptr && options.kernels->size() != field.n_steps()) {
    throw std::invalid_argument("propagation: kernel count does not match field");
  }
}

void check_unitary(const CMatrix& m, double tolerance, std::size_t step) {
  const double defect = unitarity_defect(m);
  if (!(defect <= tolerance)) {
    std::ostringstream os;
    os << "propagation lost unitarity at step " << step << ": defect " << defect;
    throw PropagationError(os.str());
  }
}

}  // namespace

Trajectory propagate_forward(const ModelSystem& model, const ControlField& field,
                             const PropagationOptions& options) {
  check_kernels(options, field);
  const std::size_t n = field.n_steps();
  const double dt = field.dt();

  Trajectory traj;
  traj.direction_ = Direction::forward;
  traj.n_steps_ = n;
  traj.stride_ = resolve_stride(options, n);
  traj.context_ = std::make_shared<const Trajectory::Context>(
      Trajectory::Context{model, field});
  traj.stored_.reserve(n / traj.stride_ + 2);

  CMatrix u = CMatrix::Identity(model.dim(), model.dim());
  traj.stored_.push_back(u);
  for (std::size_t k = 0; k < n; ++k) {
    if (options.kernels != nullptr) {
      (*options.kernels)[k].apply_left(dt, u);
    } else {
      model.step_spectrum(field[k]).apply_left(dt, u);
    }
    const std::size_t j = k + 1;
    if ((options.check_every > 0 && j % options.check_every == 0) || j == n) {
      check_unitary(u, options.unitarity_tolerance, j);
    }
    if (j % traj.stride_ == 0 || j == n) traj.stored_.push_back(u);
  }
  return traj;
}

Trajectory propagate_backward(const ModelSystem& model, const ControlField& field,
                              const Operator& b_terminal,
                              const PropagationOptions& options) {
  check_kernels(options, field);
  if (b_terminal.dim() != model.dim()) {
    throw DimensionError("propagate_backward: terminal operator dimension mismatch");
  }
  const std::size_t n = field.n_steps();
  const double dt = field.dt();

  Trajectory traj;
  traj.direction_ = Direction::backward;
  traj.n_steps_ = n;
  traj.stride_ = resolve_stride(options, n);
  traj.context_ = std::make_shared<const Trajectory::Context>(
      Trajectory::Context{model, field});
  const std::size_t count = (n + traj.stride_ - 1) / traj.stride_ + 1;
  traj.stored_.resize(count);

  // The terminal operator need not be unitary; check that B B^dagger is
  // preserved instead of unitarity itself.
  const CMatrix gram0 = b_terminal.matrix() * b_terminal.matrix().adjoint();
  const double scale = std::max(1.0, gram0.cwiseAbs().maxCoeff());

  CMatrix b = b_terminal.matrix();
  traj.stored_[count - 1] = b;
  for (std::size_t j = n; j > 0; --j) {
    const std::size_t k = j - 1;
    if (options.kernels != nullptr) {
      (*options.kernels)[k].apply_right(dt, b);
    } else {
      model.step_spectrum(field[k]).apply_right(dt, b);
    }
    if ((options.check_every > 0 && (n - k) % options.check_every == 0) || k == 0) {
      const double defect =
          (b * b.adjoint() - gram0).cwiseAbs().maxCoeff() / scale;
      if (!(defect <= options.unitarity_tolerance)) {
        std::ostringstream os;
        os << "backward propagation lost unitarity at grid point " << k
           << ": defect " << defect;
        throw PropagationError(os.str());
      }
    }
    if (k % traj.stride_ == 0) traj.stored_[k / traj.stride_] = b;
  }
  return traj;
}

CMatrix propagate_final(const ModelSystem& model, const ControlField& field,
                        const PropagationOptions& options) {
  check_kernels(options, field);
  const double dt = field.dt();
  CMatrix u = CMatrix::Identity(model.dim(), model.dim());
  for (std::size_t k = 0; k < field.n_steps(); ++k) {
    if (options.kernels != nullptr) {
      (*options.kernels)[k].apply_left(dt, u);
    } else {
      model.step_spectrum(field[k]).apply_left(dt, u);
    }
    const std::size_t j = k + 1;
    if ((options.check_every > 0 && j % options.check_every == 0) ||
        j == field.n_steps()) {
      check_unitary(u, options.unitarity_tolerance, j);
    }
  }
  return u;
}

std::size_t default_n_steps(const ModelSystem& model, double t_final,
                            double steps_per_period) {
  const double width = std::max(model.spectral_width(), 1e-12);
  const double n = std::ceil(steps_per_period * t_final * width /
                             (2.0 * std::numbers::pi));
  return static_cast<std::size_t>(std::max(1.0, n));
}

}  // namespace kgate
