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

#include <span>
#include <string>

#include "kgate/models.hpp"
#include "kgate/operators.hpp"

namespace kgate {

/// Which real functional of tau is maximized: J = a Re[tau] + b Im[tau].
class ObjectiveMode {
 public:
  enum class Kind { real_part, imag_part, combination };

  static ObjectiveMode real_part() { return {Kind::real_part, 1.0, 0.0}; }
  static ObjectiveMode imag_part() { return {Kind::imag_part, 0.0, 1.0}; }
  static ObjectiveMode combination(double a, double b);

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  double apply(Complex tau) const noexcept { return a_ * tau.real() + b_ * tau.imag(); }
  /// w with J = Re[w tau], i.e. w = a - i b. The costate terminal
  /// condition is scaled by w.
  Complex weight() const noexcept { return {a_, -b_}; }

  std::string name() const;

 private:
  ObjectiveMode(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

struct ObjectiveValue {
  Complex tau;
  double j = 0.0;
  /// |tau| / N_R
  double fidelity = 0.0;
  ObjectiveMode mode = ObjectiveMode::real_part();
};

/// Tr{O^dagger U}. Throws DimensionError on mismatched dims.
Complex tau_full(const Operator& o, const Operator& u_final);

/// sum_i <r_i| O_R^dagger U_R |r_i> with U_R the register block of u_final.
Complex tau_restricted(const GateTarget& target, const CMatrix& u_final,
                       std::span<const Index> registers);
Complex tau_restricted(const GateTarget& target, const Operator& u_final,
                       std::span<const Index> registers);

/// max over register columns i of 1 - sum_{j in R} |U_ji|^2, in [0, 1].
double leakage(const CMatrix& u_final, std::span<const Index> registers);
double leakage(const Operator& u_final, std::span<const Index> registers);

ObjectiveValue evaluate_objective(const GateTarget& target, const CMatrix& u_final,
                                  std::span<const Index> registers,
                                  const ObjectiveMode& mode);

}  // namespace kgate
