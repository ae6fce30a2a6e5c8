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

#include "kgate/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kgate {

namespace {

void check_registers(std::span<const Index> registers, Index dim) {
  if (registers.empty()) throw ModelError("register list is empty");
  std::set<Index> seen;
  for (Index r : registers) {
    if (r < 0 || r >= dim) {
      std::ostringstream os;
      os << "register index " << r << " out of range [0, " << dim << ")";
      throw ModelError(os.str());
    }
    if (!seen.insert(r).second) {
      std::ostringstream os;
      os << "duplicate register index " << r;
      throw ModelError(os.str());
    }
  }
}

}  // namespace

ModelSystem::ModelSystem(Operator h0, Operator mu, std::vector<Index> registers,
                         std::vector<std::string> labels,
                         double carrier_frequency)
    : h0_(std::move(h0)),
      mu_(std::move(mu)),
      registers_(std::move(registers)),
      labels_(std::move(labels)),
      carrier_(carrier_frequency) {
  if (h0_.role() != Role::hermitian) h0_ = Operator::hermitian(h0_.matrix());
  if (mu_.role() != Role::hermitian) mu_ = Operator::hermitian(mu_.matrix());
  if (h0_.dim() != mu_.dim()) {
    throw DimensionError("model: h0 and mu dimensions differ");
  }
  check_registers(registers_, dim());
  if (labels_.empty()) {
    for (Index k = 0; k < dim(); ++k) labels_.push_back(std::to_string(k));
  }
  if (static_cast<Index>(labels_.size()) != dim()) {
    throw ModelError("model: label count does not match dimension");
  }
  if (!(carrier_ > 0.0) || !std::isfinite(carrier_)) {
    throw ModelError("model: carrier frequency must be positive and finite");
  }
  real_ = h0_.matrix().imag().cwiseAbs().maxCoeff() == 0.0 &&
          mu_.matrix().imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_) {
    h0_real_ = h0_.matrix().real();
    mu_real_ = mu_.matrix().real();
    // Exact symmetry so the real eigensolver never sees roundoff asymmetry.
    h0_real_ = 0.5 * (h0_real_ + h0_real_.transpose()).eval();
    mu_real_ = 0.5 * (mu_real_ + mu_real_.transpose()).eval();
  }
}

CMatrix ModelSystem::generator(double eps) const {
  if (real_) return (h0_real_ - eps * mu_real_).cast<Complex>();
  return h0_.matrix() - eps * mu_.matrix();
}

HermitianSpectrum ModelSystem::step_spectrum(double eps) const {
  if (real_) return HermitianSpectrum(RMatrix(h0_real_ - eps * mu_real_));
  CMatrix h = h0_.matrix() - eps * mu_.matrix();
  h = 0.5 * (h + h.adjoint()).eval();
  return HermitianSpectrum(h);
}

double ModelSystem::spectral_width() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h0_.matrix(),
                                                Eigen::EigenvaluesOnly);
  const RVector& w = solver.eigenvalues();
  return w.maxCoeff() - w.minCoeff();
}

Operator embed_register_gate(const Operator& o_r, Index full_dim,
                             std::span<const Index> registers) {
  check_registers(registers, full_dim);
  if (o_r.dim() != static_cast<Index>(registers.size())) {
    throw DimensionError("register gate dimension does not match register count");
  }
  CMatrix m = CMatrix::Identity(full_dim, full_dim);
  for (Index r : registers) m(r, r) = 0.0;
  for (std::size_t a = 0; a < registers.size(); ++a) {
    for (std::size_t b = 0; b < registers.size(); ++b) {
      m(registers[a], registers[b]) =
          o_r(static_cast<Index>(a), static_cast<Index>(b));
    }
  }
  return Operator::unitary(std::move(m));
}

GateTarget::GateTarget(Operator o_r, Index full_dim,
                       std::span<const Index> registers)
    : o_r_(o_r.role() == Role::unitary ? std::move(o_r)
                                       : Operator::unitary(o_r.matrix())),
      b_terminal_(embed_register_gate(o_r_.adjoint(), full_dim, registers)),
      registers_(registers.begin(), registers.end()) {}

ModelAndTarget build_hadamard_model() {
  constexpr Index kGround = 15;
  constexpr Index kExcited = 5;
  constexpr double kOmegaG = 1.0;
  constexpr double kOmegaE = 0.9;
  constexpr double kOmega00 = 15.0;
  constexpr double kMu0 = 0.1;
  constexpr Index n = kGround + kExcited;

  CMatrix h0 = CMatrix::Zero(n, n);
  CMatrix mu = CMatrix::Zero(n, n);
  std::vector<std::string> labels;
  for (Index i = 0; i < kGround; ++i) {
    h0(i, i) = static_cast<double>(i) * kOmegaG;
    labels.push_back("g" + std::to_string(i + 1));
  }
  for (Index j = 0; j < kExcited; ++j) {
    h0(kGround + j, kGround + j) = kOmega00 + static_cast<double>(j) * kOmegaE;
    labels.push_back("e" + std::to_string(j + 1));
  }
  for (Index i = 0; i < kGround; ++i) {
    for (Index j = 0; j < kExcited; ++j) {
      mu(i, kGround + j) = kMu0;
      mu(kGround + j, i) = kMu0;
    }
  }
  std::vector<Index> registers{0, 1};
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix o(2, 2);
  o << s, s, s, -s;

  ModelSystem model(Operator::hermitian(std::move(h0)),
                    Operator::hermitian(std::move(mu)), registers,
                    std::move(labels), kOmega00);
  GateTarget target(Operator::unitary(std::move(o)), n, registers);
  return {std::move(model), std::move(target)};
}

ModelAndTarget build_qft_model() {
  // Per-mode level order: g0, g1, e0, e1.
  constexpr Index kMode = 4;
  constexpr Index n = kMode * kMode;
  const double e_alpha[kMode] = {0.0, 1.0, 15.0, 15.8};
  const double e_beta[kMode] = {0.0, 0.9, 14.5, 15.2};
  constexpr double kMuAlpha = 0.1;
  constexpr double kMuBeta = 0.08;
  constexpr double kDuschinsky = 0.21;
  const char* names[kMode] = {"g0", "g1", "e0", "e1"};

  auto mode_dipole = [](double mu0) {
    RMatrix m = RMatrix::Zero(kMode, kMode);
    for (Index g = 0; g < 2; ++g) {
      for (Index e = 2; e < 4; ++e) {
        m(e, g) = mu0;
        m(g, e) = mu0;
      }
    }
    return m;
  };
  const RMatrix mu_a = mode_dipole(kMuAlpha);
  const RMatrix mu_b = mode_dipole(kMuBeta);
  const RMatrix id = RMatrix::Identity(kMode, kMode);

  auto index = [](Index a, Index b) { return a * kMode + b; };

  RMatrix h0 = RMatrix::Zero(n, n);
  RMatrix mu = RMatrix::Zero(n, n);
  std::vector<std::string> labels;
  for (Index a = 0; a < kMode; ++a) {
    for (Index b = 0; b < kMode; ++b) {
      h0(index(a, b), index(a, b)) = e_alpha[a] + e_beta[b];
      labels.push_back(std::string(names[a]) + "_a " + names[b] + "_b");
    }
  }
  // mu_alpha (x) 1_beta + 1_alpha (x) mu_beta
  for (Index a = 0; a < kMode; ++a) {
    for (Index b = 0; b < kMode; ++b) {
      for (Index a2 = 0; a2 < kMode; ++a2) {
        for (Index b2 = 0; b2 < kMode; ++b2) {
          mu(index(a, b), index(a2, b2)) =
              mu_a(a, a2) * id(b, b2) + id(a, a2) * mu_b(b, b2);
        }
      }
    }
  }
  // Duschinsky term between |e0>_a|e1>_b and |e1>_a|e0>_b.
  h0(index(2, 3), index(3, 2)) = kDuschinsky;
  h0(index(3, 2), index(2, 3)) = kDuschinsky;

  std::vector<Index> registers{index(0, 0), index(0, 1), index(1, 0),
                               index(1, 1)};
  const Complex i(0.0, 1.0);
  CMatrix o(4, 4);
  o << 1.0, 1.0, 1.0, 1.0,
       1.0, i, -1.0, -i,
       1.0, -1.0, 1.0, -1.0,
       1.0, -i, -1.0, i;
  o *= 0.5;

  ModelSystem model(Operator::hermitian(h0.cast<Complex>()),
                    Operator::hermitian(mu.cast<Complex>()), registers,
                    std::move(labels), e_alpha[2] - e_alpha[0]);
  GateTarget target(Operator::unitary(std::move(o)), n, registers);
  return {std::move(model), std::move(target)};
}

ModelAndTarget build_custom_model(const ModelSpec& spec) {
  const Index n = static_cast<Index>(spec.levels.size());
  if (n < 1) throw ModelError("model spec: at least one level is required");

  CMatrix h0 = CMatrix::Zero(n, n);
  CMatrix mu = CMatrix::Zero(n, n);
  std::vector<std::string> labels;
  for (Index k = 0; k < n; ++k) {
    const auto& level = spec.levels[static_cast<std::size_t>(k)];
    if (!std::isfinite(level.energy)) {
      throw ModelError("model spec: level '" + level.label +
                       "' has a non-finite energy");
    }
    h0(k, k) = level.energy;
    labels.push_back(level.label.empty() ? std::to_string(k) : level.label);
  }

  auto place = [n](CMatrix& m, const ModelSpec::Coupling& c, const char* what) {
    if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n) {
      std::ostringstream os;
      os << "model spec: " << what << " index (" << c.i << ", " << c.j
         << ") out of range [0, " << n << ")";
      throw ModelError(os.str());
    }
    if (!std::isfinite(c.strength)) {
      throw ModelError(std::string("model spec: non-finite ") + what +
                       " strength");
    }
    m(c.i, c.j) = c.strength;
    m(c.j, c.i) = c.strength;
  };
  std::set<std::pair<Index, Index>> seen;
  for (const auto& c : spec.couplings) {
    place(mu, c, "coupling");
    if (!seen.insert({std::min(c.i, c.j), std::max(c.i, c.j)}).second) {
      std::ostringstream os;
      os << "model spec: duplicate coupling (" << c.i << ", " << c.j << ")";
      throw ModelError(os.str());
    }
  }
  for (const auto& c : spec.static_couplings) {
    if (c.i == c.j) {
      throw ModelError("model spec: static coupling must be off-diagonal; "
                       "use the level energy instead");
    }
    place(h0, c, "static coupling");
  }

  check_registers(spec.registers, n);
  const Index nr = static_cast<Index>(spec.registers.size());
  if (spec.target.rows() != nr || spec.target.cols() != nr) {
    std::ostringstream os;
    os << "model spec: target must be " << nr << "x" << nr << ", got "
       << spec.target.rows() << "x" << spec.target.cols();
    throw ModelError(os.str());
  }
  const double defect = unitarity_defect(spec.target);
  if (!(defect <= kUnitaryTolerance)) {
    std::ostringstream os;
    os << "model spec: target is not unitary (max|O^dagger O - 1| = "
       << defect << ")";
    throw ModelError(os.str());
  }

  double carrier = 0.0;
  if (spec.carrier_frequency) {
    carrier = *spec.carrier_frequency;
  } else {
    // Lowest positive dipole-allowed transition out of a register level.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : spec.couplings) {
      const bool touches =
          std::find(spec.registers.begin(), spec.registers.end(), c.i) !=
              spec.registers.end() ||
          std::find(spec.registers.begin(), spec.registers.end(), c.j) !=
              spec.registers.end();
      const double gap = std::abs(h0(c.i, c.i).real() - h0(c.j, c.j).real());
      if (touches && gap > 0.0) best = std::min(best, gap);
    }
    carrier = std::isfinite(best) ? best : 1.0;
  }

  ModelSystem model(Operator::hermitian(std::move(h0)),
                    Operator::hermitian(std::move(mu)), spec.registers,
                    std::move(labels), carrier);
  GateTarget target(Operator::unitary(spec.target), n, spec.registers);
  return {std::move(model), std::move(target)};
}

}  // namespace kgate
