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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kgate {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix failed a structural check (Hermitian / unitary). Carries the
/// measured elementwise deviation.
class StructureError : public Error {
 public:
  StructureError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMatrix& a);
/// max_ij |(A^dagger A - 1)_ij|
double unitarity_defect(const CMatrix& a);

enum class Role { general, hermitian, unitary };

/// Dense square complex matrix tagged with the structure it was validated
/// against at construction. Immutable after construction.
class Operator {
 public:
  /// No structural claim; only squareness and dim >= 1 are enforced.
  static Operator general(CMatrix m);
  static Operator hermitian(CMatrix m, double tolerance = kHermitianTolerance);
  static Operator unitary(CMatrix m, double tolerance = kUnitaryTolerance);
  static Operator identity(Index dim);
  static Operator zero(Index dim);

  Index dim() const noexcept { return m_.rows(); }
  Role role() const noexcept { return role_; }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index row, Index col) const { return m_(row, col); }

  Operator adjoint() const;

 private:
  Operator(CMatrix m, Role role) : m_(std::move(m)), role_(role) {}

  CMatrix m_;
  Role role_ = Role::general;
};

/// Product. Unitary x unitary keeps the unitary tag without re-checking.
Operator operator*(const Operator& a, const Operator& b);

enum class StepSign { forward, backward };

/// Eigendecomposition H = V diag(w) V^dagger of a Hermitian generator. Once
/// built it yields exp(-i H dt) for any dt and applies it to operators from
/// either side without forming the exponential. Real symmetric generators
/// are decomposed in real arithmetic.
class HermitianSpectrum {
 public:
  HermitianSpectrum() = default;
  explicit HermitianSpectrum(const RMatrix& h);
  explicit HermitianSpectrum(const CMatrix& h);

  Index dim() const noexcept { return values_.size(); }
  bool is_real() const noexcept { return real_; }
  const RVector& eigenvalues() const noexcept { return values_; }

  /// exp(-i H dt); negative dt gives the backward kernel.
  CMatrix exponential(double dt) const;
  /// Phases exp(-i w_k dt).
  CVector phases(double dt) const;

  /// x <- exp(-i H dt) x
  void apply_left(double dt, CMatrix& x) const;
  /// x <- x exp(-i H dt)
  void apply_right(double dt, CMatrix& x) const;

  /// x V  (x expressed in the eigenbasis from the right)
  CMatrix to_eigenbasis_right(const CMatrix& x) const;
  /// y V^dagger
  CMatrix from_eigenbasis_right(const CMatrix& y) const;

 private:
  RVector values_;
  RMatrix real_vectors_;
  CMatrix complex_vectors_;
  bool real_ = true;
};

/// exp(-i H dt) for forward, exp(+i H dt) for backward (hbar = 1).
/// Throws StructureError when H is not Hermitian within kHermitianTolerance
/// and std::invalid_argument when dt <= 0.
Operator expm_hermitian_step(const Operator& h, double dt, StepSign sign);

/// Tr{A^dagger B}.
Complex project_trace(const Operator& a, const Operator& b);

}  // namespace kgate
