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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgate/operators.hpp"

namespace kgate {

/// Invalid model description (bad indices, non-unitary target, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A finite level system driven through a single real field:
/// H(t) = h0 - mu * eps(t).
///
/// `registers` lists the levels spanning the computational subspace, in the
/// order that defines the matrix representation of register-space gates.
class ModelSystem {
 public:
  ModelSystem(Operator h0, Operator mu, std::vector<Index> registers,
              std::vector<std::string> labels, double carrier_frequency);

  Index dim() const noexcept { return h0_.dim(); }
  const Operator& h0() const noexcept { return h0_; }
  const Operator& mu() const noexcept { return mu_; }
  std::span<const Index> registers() const noexcept { return registers_; }
  Index register_dim() const noexcept {
    return static_cast<Index>(registers_.size());
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Carrier used for the default guess field (the 00-line).
  double carrier_frequency() const noexcept { return carrier_; }

  /// True when h0 and mu have no imaginary part; propagation then runs in
  /// real arithmetic for the eigendecompositions.
  bool is_real() const noexcept { return real_; }

  /// h0 - mu * eps
  CMatrix generator(double eps) const;
  HermitianSpectrum step_spectrum(double eps) const;

  /// max - min eigenvalue of h0.
  double spectral_width() const;

 private:
  Operator h0_;
  Operator mu_;
  std::vector<Index> registers_;
  std::vector<std::string> labels_;
  double carrier_;
  bool real_ = false;
  RMatrix h0_real_;
  RMatrix mu_real_;
};

/// Register-space target gate together with the full-space terminal
/// condition for the costate: o_r^dagger on the register block, identity on
/// the passive levels, zero cross blocks.
class GateTarget {
 public:
  GateTarget(Operator o_r, Index full_dim, std::span<const Index> registers);

  const Operator& o_r() const noexcept { return o_r_; }
  const Operator& b_terminal() const noexcept { return b_terminal_; }
  std::span<const Index> registers() const noexcept { return registers_; }
  Index register_dim() const noexcept { return o_r_.dim(); }

 private:
  Operator o_r_;
  Operator b_terminal_;
  std::vector<Index> registers_;
};

struct ModelAndTarget {
  ModelSystem model;
  GateTarget target;
};

/// Two electronic surfaces, 15 ground + 5 excited levels, every g-e pair
/// coupled with strength 0.1. Registers g1, g2; target Hadamard.
ModelAndTarget build_hadamard_model();

/// Two vibrational modes alpha, beta, each with levels (g0, g1, e0, e1),
/// combined as alpha (x) beta in lexicographic order (16 levels) with a
/// Duschinsky coupling between |e0 e1> and |e1 e0>. Registers are
/// |g_i>_alpha |g_j>_beta ordered 00, 01, 10, 11; target is the two-qubit
/// quantum Fourier transform.
ModelAndTarget build_qft_model();

/// Level-system description from which a custom model is assembled.
struct ModelSpec {
  struct Level {
    std::string label;
    double energy = 0.0;
  };
  struct Coupling {
    Index i = 0;
    Index j = 0;
    double strength = 0.0;
  };

  std::vector<Level> levels;
  /// Dipole couplings; the Hermitian conjugate is added automatically.
  std::vector<Coupling> couplings;
  /// Static off-diagonal h0 couplings (e.g. Duschinsky terms), symmetrized.
  std::vector<Coupling> static_couplings;
  std::vector<Index> registers;
  /// Register-space target, registers.size() square.
  CMatrix target;
  std::optional<double> carrier_frequency;
};

/// Validates and assembles. Throws ModelError for duplicate registers, an
/// index out of range, a non-square or non-unitary (1e-10) target.
ModelAndTarget build_custom_model(const ModelSpec& spec);

/// JSON model-spec document (schema in docs/model_spec.md).
ModelSpec parse_model_spec(std::string_view json_text);
ModelSpec load_model_spec(const std::filesystem::path& path);
std::string model_spec_to_json(const ModelSpec& spec);

/// Target-only document: {"target": [[[re, im], ...], ...]}.
CMatrix parse_target_matrix(std::string_view json_text);

/// The embedding of o_r into the full space with identity on passive levels
/// (the unitary a perfect gate would produce).
Operator embed_register_gate(const Operator& o_r, Index full_dim,
                             std::span<const Index> registers);

}  // namespace kgate
