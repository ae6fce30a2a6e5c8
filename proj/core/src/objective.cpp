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

#include "kgate/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kgate {

namespace {

void check_indices(std::span<const Index> registers, Index dim) {
  for (Index r : registers) {
    if (r < 0 || r >= dim) {
      std::ostringstream os;
      os << "register index " << r << " out of range for dimension " << dim;
      throw DimensionError(os.str());
    }
  }
}

}  // namespace

ObjectiveMode ObjectiveMode::combination(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || (a == 0.0 && b == 0.0)) {
    throw std::invalid_argument("objective combination needs finite, non-zero weights");
  }
  return {Kind::combination, a, b};
}

std::string ObjectiveMode::name() const {
  switch (kind_) {
    case Kind::real_part:
      return "real-part";
    case Kind::imag_part:
      return "imag-part";
    case Kind::combination:
      return "combination";
  }
  return "unknown";
}

Complex tau_full(const Operator& o, const Operator& u_final) {
  if (o.dim() != u_final.dim()) {
    throw DimensionError("tau_full: dimension mismatch");
  }
  return project_trace(o, u_final);
}

Complex tau_restricted(const GateTarget& target, const CMatrix& u_final,
                       std::span<const Index> registers) {
  check_indices(registers, u_final.rows());
  const Index nr = static_cast<Index>(registers.size());
  if (target.register_dim() != nr) {
    throw DimensionError("tau_restricted: target dimension differs from register count");
  }
  const CMatrix& o = target.o_r().matrix();
  // sum_i (O^dagger U_R)_ii = sum_{i,j} conj(O_ji) U_{r_j r_i}
  Complex tau = 0.0;
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < nr; ++j) {
      tau += std::conj(o(j, i)) * u_final(registers[j], registers[i]);
    }
  }
  return tau;
}

Complex tau_restricted(const GateTarget& target, const Operator& u_final,
                       std::span<const Index> registers) {
  return tau_restricted(target, u_final.matrix(), registers);
}

double leakage(const CMatrix& u_final, std::span<const Index> registers) {
  check_indices(registers, u_final.rows());
  double worst = 0.0;
  for (Index col : registers) {
    double kept = 0.0;
    for (Index row : registers) kept += std::norm(u_final(row, col));
    worst = std::max(worst, 1.0 - kept);
  }
  return std::clamp(worst, 0.0, 1.0);
}

double leakage(const Operator& u_final, std::span<const Index> registers) {
  return leakage(u_final.matrix(), registers);
}

ObjectiveValue evaluate_objective(const GateTarget& target, const CMatrix& u_final,
                                  std::span<const Index> registers,
                                  const ObjectiveMode& mode) {
  ObjectiveValue v;
  v.tau = tau_restricted(target, u_final, registers);
  v.j = mode.apply(v.tau);
  v.fidelity = std::abs(v.tau) / static_cast<double>(registers.size());
  v.mode = mode;
  return v;
}

}  // namespace kgate
