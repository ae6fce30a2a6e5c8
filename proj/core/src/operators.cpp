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

#include "kgate/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kgate {

namespace {

void require_square(const CMatrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << "operator must be square with dim >= 1, got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

// Real x complex products done as two real GEMMs; Eigen would otherwise
// promote the real factor to complex.
CMatrix real_left(const RMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), b.cols());
  out.real().noalias() = a * b.real();
  out.imag().noalias() = a * b.imag();
  return out;
}

CMatrix real_left_transposed(const RMatrix& a, const CMatrix& b) {
  CMatrix out(a.cols(), b.cols());
  out.real().noalias() = a.transpose() * b.real();
  out.imag().noalias() = a.transpose() * b.imag();
  return out;
}

CMatrix real_right(const CMatrix& b, const RMatrix& a) {
  CMatrix out(b.rows(), a.cols());
  out.real().noalias() = b.real() * a;
  out.imag().noalias() = b.imag() * a;
  return out;
}

CMatrix real_right_transposed(const CMatrix& b, const RMatrix& a) {
  CMatrix out(b.rows(), a.rows());
  out.real().noalias() = b.real() * a.transpose();
  out.imag().noalias() = b.imag() * a.transpose();
  return out;
}

}  // namespace

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix g = a.adjoint() * a;
  return (g - CMatrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
}

Operator Operator::general(CMatrix m) {
  require_square(m);
  return Operator(std::move(m), Role::general);
}

Operator Operator::hermitian(CMatrix m, double tolerance) {
  require_square(m);
  const double dev = hermiticity_defect(m);
  if (!(dev <= tolerance)) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|A - A^dagger| = " << dev
       << " exceeds " << tolerance;
    throw StructureError(os.str(), dev);
  }
  return Operator(std::move(m), Role::hermitian);
}

Operator Operator::unitary(CMatrix m, double tolerance) {
  require_square(m);
  const double dev = unitarity_defect(m);
  if (!(dev <= tolerance)) {
    std::ostringstream os;
    os << "matrix is not unitary: max|A^dagger A - 1| = " << dev
       << " exceeds " << tolerance;
    throw StructureError(os.str(), dev);
  }
  return Operator(std::move(m), Role::unitary);
}

Operator Operator::identity(Index dim) {
  if (dim < 1) throw DimensionError("identity requires dim >= 1");
  return Operator(CMatrix::Identity(dim, dim), Role::unitary);
}

Operator Operator::zero(Index dim) {
  if (dim < 1) throw DimensionError("zero operator requires dim >= 1");
  return Operator(CMatrix::Zero(dim, dim), Role::hermitian);
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), role_); }

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("operator product: dimension mismatch");
  }
  CMatrix m = a.matrix() * b.matrix();
  if (a.role() == Role::unitary && b.role() == Role::unitary) {
    return Operator::unitary(std::move(m), 1e-8);
  }
  return Operator::general(std::move(m));
}

HermitianSpectrum::HermitianSpectrum(const RMatrix& h) : real_(true) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(h);
  values_ = solver.eigenvalues();
  real_vectors_ = solver.eigenvectors();
}

HermitianSpectrum::HermitianSpectrum(const CMatrix& h) {
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    *this = HermitianSpectrum(RMatrix(h.real()));
    return;
  }
  real_ = false;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  values_ = solver.eigenvalues();
  complex_vectors_ = solver.eigenvectors();
}

CVector HermitianSpectrum::phases(double dt) const {
  CVector p(values_.size());
  for (Index k = 0; k < values_.size(); ++k) {
    const double arg = -values_(k) * dt;
    p(k) = Complex(std::cos(arg), std::sin(arg));
  }
  return p;
}

CMatrix HermitianSpectrum::exponential(double dt) const {
  const CVector p = phases(dt);
  if (real_) {
    CMatrix scaled = real_vectors_.cast<Complex>() * p.asDiagonal();
    return real_right_transposed(scaled, real_vectors_);
  }
  return complex_vectors_ * p.asDiagonal() * complex_vectors_.adjoint();
}

void HermitianSpectrum::apply_left(double dt, CMatrix& x) const {
  const CVector p = phases(dt);
  if (real_) {
    CMatrix y = real_left_transposed(real_vectors_, x);
    y = p.asDiagonal() * y;
    x = real_left(real_vectors_, y);
    return;
  }
  CMatrix y = complex_vectors_.adjoint() * x;
  y = p.asDiagonal() * y;
  x.noalias() = complex_vectors_ * y;
}

void HermitianSpectrum::apply_right(double dt, CMatrix& x) const {
  const CVector p = phases(dt);
  CMatrix y = to_eigenbasis_right(x);
  y = y * p.asDiagonal();
  x = from_eigenbasis_right(y);
}

CMatrix HermitianSpectrum::to_eigenbasis_right(const CMatrix& x) const {
  if (real_) return real_right(x, real_vectors_);
  return x * complex_vectors_;
}

CMatrix HermitianSpectrum::from_eigenbasis_right(const CMatrix& y) const {
  if (real_) return real_right_transposed(y, real_vectors_);
  return y * complex_vectors_.adjoint();
}

Operator expm_hermitian_step(const Operator& h, double dt, StepSign sign) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("expm_hermitian_step: dt must be positive");
  }
  const double dev = hermiticity_defect(h.matrix());
  if (!(dev <= kHermitianTolerance)) {
    std::ostringstream os;
    os << "expm_hermitian_step: generator is not Hermitian, max deviation "
       << dev;
    throw StructureError(os.str(), dev);
  }
  // Symmetrize so the eigensolver sees an exactly Hermitian matrix.
  const CMatrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
  const HermitianSpectrum spectrum(sym);
  const double signed_dt = sign == StepSign::forward ? dt : -dt;
  return Operator::unitary(spectrum.exponential(signed_dt), 1e-12);
}

Complex project_trace(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "project_trace: dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
  // Tr{A^dagger B} = sum_ij conj(A_ij) B_ij
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
}

}  // namespace kgate
