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

#include <gtest/gtest.h>

#include <cmath>

#include "kgate/models.hpp"
#include "test_support.hpp"

namespace kgate {
namespace {

using testing::max_abs_diff;

constexpr Complex I(0.0, 1.0);

// Hadamard model indices: g1..g15 -> 0..14, e1..e5 -> 15..19.
Index g(int i) { return i - 1; }
Index e(int j) { return 14 + j; }

// QFT model: level a of mode alpha, level b of mode beta, with
// 0 = g0, 1 = g1, 2 = e0, 3 = e1.
Index q(int a, int b) { return 4 * a + b; }

TEST(HadamardModel, Energies) {
  const auto [model, target] = build_hadamard_model();
  ASSERT_EQ(model.dim(), 20);
  const CMatrix& h = model.h0().matrix();
  EXPECT_DOUBLE_EQ(h(g(1), g(1)).real(), 0.0);
  EXPECT_DOUBLE_EQ(h(g(15), g(15)).real(), 14.0);
  EXPECT_DOUBLE_EQ(h(e(1), e(1)).real(), 15.0);
  EXPECT_NEAR(h(e(5), e(5)).real(), 18.6, 1e-14);
  for (int i = 1; i <= 15; ++i) EXPECT_DOUBLE_EQ(h(g(i), g(i)).real(), i - 1.0);
  for (int j = 1; j <= 5; ++j) EXPECT_NEAR(h(e(j), e(j)).real(), 15.0 + 0.9 * (j - 1), 1e-14);
  EXPECT_EQ(model.labels()[static_cast<std::size_t>(g(3))], "g3");
  EXPECT_EQ(model.labels()[static_cast<std::size_t>(e(2))], "e2");
}

TEST(HadamardModel, DipoleStructure) {
  const auto [model, target] = build_hadamard_model();
  const CMatrix& mu = model.mu().matrix();
  EXPECT_DOUBLE_EQ(mu(g(3), e(2)).real(), 0.1);
  EXPECT_DOUBLE_EQ(std::abs(mu(g(3), g(4))), 0.0);
  int ge = 0;
  for (int i = 1; i <= 15; ++i) {
    for (int j = 1; j <= 5; ++j) {
      EXPECT_EQ(mu(g(i), e(j)), Complex(0.1, 0.0));
      EXPECT_EQ(mu(e(j), g(i)), Complex(0.1, 0.0));
      ++ge;
    }
  }
  EXPECT_EQ(ge, 75);
  EXPECT_DOUBLE_EQ(mu.topLeftCorner(15, 15).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(mu.bottomRightCorner(5, 5).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(hermiticity_defect(mu), 0.0);
  const CMatrix& h = model.h0().matrix();
  EXPECT_DOUBLE_EQ(h.topRightCorner(15, 5).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(model.is_real());
}

TEST(HadamardModel, TargetAndRegisters) {
  const auto [model, target] = build_hadamard_model();
  ASSERT_EQ(model.register_dim(), 2);
  EXPECT_EQ(model.registers()[0], g(1));
  EXPECT_EQ(model.registers()[1], g(2));
  const CMatrix& o = target.o_r().matrix();
  CMatrix hadamard(2, 2);
  hadamard << 1.0, 1.0, 1.0, -1.0;
  hadamard /= std::sqrt(2.0);
  EXPECT_LE(max_abs_diff(o, hadamard), 1e-16);
  EXPECT_LE(max_abs_diff(o.adjoint() * o, CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_DOUBLE_EQ(model.carrier_frequency(), 15.0);
}

TEST(GateTarget, TerminalConditionLayout) {
  const auto [model, target] = build_hadamard_model();
  const CMatrix& b = target.b_terminal().matrix();
  const CMatrix& o = target.o_r().matrix();
  const auto regs = model.registers();
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) EXPECT_EQ(b(regs[i], regs[j]), std::conj(o(j, i)));
  for (Index i = 2; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) {
      const Complex expected = (i == j) ? Complex(1.0) : Complex(0.0);
      EXPECT_EQ(b(i, j), expected) << i << "," << j;
      if (j >= 2) EXPECT_EQ(b(j, i), expected);
    }
  }
}

TEST(GateTarget, ScatteredRegistersEmbedAdjointTarget) {
  std::mt19937_64 rng(21);
  const CMatrix o = testing::random_unitary(3, rng);
  const std::vector<Index> regs = {4, 0, 2};
  const GateTarget t(Operator::unitary(o), 6, regs);
  const CMatrix& b = t.b_terminal().matrix();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(b(regs[i], regs[j]), std::conj(o(j, i)));
  EXPECT_EQ(b(1, 1), Complex(1.0));
  EXPECT_EQ(b(3, 3), Complex(1.0));
  EXPECT_EQ(b(1, 4), Complex(0.0));
  EXPECT_EQ(b(0, 3), Complex(0.0));
}

TEST(QftModel, EnergiesAndDuschinsky) {
  const auto [model, target] = build_qft_model();
  ASSERT_EQ(model.dim(), 16);
  const CMatrix& h = model.h0().matrix();
  EXPECT_NEAR(h(q(1, 1), q(1, 1)).real(), 1.9, 1e-14);
  EXPECT_NEAR(h(q(2, 2), q(2, 2)).real(), 15.0 + 14.5, 1e-14);
  EXPECT_NEAR(h(q(3, 3), q(3, 3)).real(), 15.8 + 15.2, 1e-14);
  EXPECT_DOUBLE_EQ(h(q(2, 3), q(3, 2)).real(), 0.21);
  EXPECT_DOUBLE_EQ(h(q(3, 2), q(2, 3)).real(), 0.21);
  // Nothing else off the diagonal.
  int off = 0;
  for (Index i = 0; i < 16; ++i)
    for (Index j = 0; j < 16; ++j)
      if (i != j && h(i, j) != Complex(0.0)) ++off;
  EXPECT_EQ(off, 2);
  EXPECT_DOUBLE_EQ(h.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(QftModel, DipoleIsSumOfModeDipoles) {
  const auto [model, target] = build_qft_model();
  RMatrix mode_a = RMatrix::Zero(4, 4);
  RMatrix mode_b = RMatrix::Zero(4, 4);
  for (int gl : {0, 1}) {
    for (int el : {2, 3}) {
      mode_a(gl, el) = mode_a(el, gl) = 0.1;
      mode_b(gl, el) = mode_b(el, gl) = 0.08;
    }
  }
  const RMatrix id = RMatrix::Identity(4, 4);
  RMatrix expected = RMatrix::Zero(16, 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int a2 = 0; a2 < 4; ++a2)
        for (int b2 = 0; b2 < 4; ++b2)
          expected(q(a, b), q(a2, b2)) = mode_a(a, a2) * id(b, b2) + id(a, a2) * mode_b(b, b2);
  EXPECT_LE(max_abs_diff(model.mu().matrix(), expected.cast<Complex>()), 1e-17);
}

TEST(QftModel, NoDirectRegisterDriving) {
  const auto [model, target] = build_qft_model();
  const CMatrix& mu = model.mu().matrix();
  for (Index r : model.registers())
    for (Index s : model.registers()) EXPECT_EQ(mu(r, s), Complex(0.0));
}

TEST(QftModel, RegistersAndTarget) {
  const auto [model, target] = build_qft_model();
  const std::vector<Index> expected = {q(0, 0), q(0, 1), q(1, 0), q(1, 1)};
  ASSERT_EQ(model.register_dim(), 4);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(model.registers()[k], expected[k]);
  CMatrix qft(4, 4);
  qft << 1, 1, 1, 1, 1, I, -1.0, -I, 1, -1, 1, -1, 1, -I, -1.0, I;
  qft *= 0.5;
  const CMatrix& o = target.o_r().matrix();
  EXPECT_LE(max_abs_diff(o, qft), 1e-16);
  EXPECT_LE(max_abs_diff(o * o.adjoint(), CMatrix::Identity(4, 4)), 1e-15);
}

ModelSpec two_level_spec() {
  ModelSpec spec;
  spec.levels = {{"a", 0.0}, {"b", 1.0}};
  spec.couplings = {{0, 1, 1.0}};
  spec.registers = {0, 1};
  spec.target = CMatrix::Identity(2, 2);
  return spec;
}

TEST(CustomModel, TwoLevelIdentity) {
  const auto [model, target] = build_custom_model(two_level_spec());
  EXPECT_EQ(model.dim(), 2);
  EXPECT_EQ(model.mu()(0, 1), Complex(1.0));
  EXPECT_EQ(model.mu()(1, 0), Complex(1.0));
  EXPECT_LE(max_abs_diff(target.b_terminal().matrix(), CMatrix::Identity(2, 2)), 0.0);
  EXPECT_DOUBLE_EQ(model.carrier_frequency(), 1.0);
}

TEST(CustomModel, RejectsNonUnitaryTarget) {
  ModelSpec spec = two_level_spec();
  spec.target << 1.0, 0.0, 0.0, 2.0;
  EXPECT_THROW(build_custom_model(spec), Error);
}

TEST(CustomModel, RejectsBadIndices) {
  ModelSpec dup = two_level_spec();
  dup.registers = {0, 0};
  EXPECT_THROW(build_custom_model(dup), ModelError);

  ModelSpec range = two_level_spec();
  range.couplings = {{0, 2, 1.0}};
  EXPECT_THROW(build_custom_model(range), ModelError);

  ModelSpec neg = two_level_spec();
  neg.registers = {-1, 1};
  EXPECT_THROW(build_custom_model(neg), ModelError);

  ModelSpec size = two_level_spec();
  size.target = CMatrix::Identity(3, 3);
  EXPECT_THROW(build_custom_model(size), ModelError);

  ModelSpec twice = two_level_spec();
  twice.couplings = {{0, 1, 1.0}, {1, 0, 0.5}};
  EXPECT_THROW(build_custom_model(twice), ModelError);
}

ModelSpec hadamard_spec() {
  ModelSpec spec;
  for (int i = 1; i <= 15; ++i) spec.levels.push_back({"g" + std::to_string(i), i - 1.0});
  for (int j = 1; j <= 5; ++j) spec.levels.push_back({"e" + std::to_string(j), 15.0 + 0.9 * (j - 1)});
  for (int i = 1; i <= 15; ++i)
    for (int j = 1; j <= 5; ++j) spec.couplings.push_back({g(i), e(j), 0.1});
  spec.registers = {0, 1};
  spec.target = CMatrix(2, 2);
  spec.target << 1.0, 1.0, 1.0, -1.0;
  spec.target /= std::sqrt(2.0);
  spec.carrier_frequency = 15.0;
  return spec;
}

TEST(CustomModel, ExplicitSpecReproducesHadamardModelBitForBit) {
  const auto built = build_hadamard_model();
  const auto custom = build_custom_model(hadamard_spec());
  EXPECT_TRUE(built.model.h0().matrix() == custom.model.h0().matrix());
  EXPECT_TRUE(built.model.mu().matrix() == custom.model.mu().matrix());
  EXPECT_TRUE(built.target.o_r().matrix() == custom.target.o_r().matrix());
  EXPECT_TRUE(built.target.b_terminal().matrix() == custom.target.b_terminal().matrix());
  EXPECT_EQ(built.model.labels(), custom.model.labels());
  EXPECT_DOUBLE_EQ(built.model.carrier_frequency(), custom.model.carrier_frequency());

  // Through JSON text as well.
  const auto reparsed = build_custom_model(parse_model_spec(model_spec_to_json(hadamard_spec())));
  EXPECT_TRUE(built.model.h0().matrix() == reparsed.model.h0().matrix());
  EXPECT_TRUE(built.model.mu().matrix() == reparsed.model.mu().matrix());
  EXPECT_TRUE(built.target.o_r().matrix() == reparsed.target.o_r().matrix());
}

TEST(ModelSpecJson, ParsesDocumentedSchema) {
  const char* text = R"({
    "levels": [{"label": "g0", "energy": 0}, {"label": "g1", "energy": 1},
               {"label": "e", "energy": 10}],
    "couplings": [[0, 2, 0.5], [1, 2, 0.5]],
    "static_couplings": [[0, 1, 0.01]],
    "registers": [0, 1],
    "target": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
    "carrier_frequency": 9.5
  })";
  const ModelSpec spec = parse_model_spec(text);
  ASSERT_EQ(spec.levels.size(), 3u);
  EXPECT_EQ(spec.levels[2].label, "e");
  ASSERT_EQ(spec.static_couplings.size(), 1u);
  const auto [model, target] = build_custom_model(spec);
  EXPECT_DOUBLE_EQ(model.h0()(0, 1).real(), 0.01);
  EXPECT_DOUBLE_EQ(model.h0()(1, 0).real(), 0.01);
  EXPECT_DOUBLE_EQ(model.carrier_frequency(), 9.5);
}

TEST(ModelSpecJson, MalformedDocumentsThrowModelError) {
  EXPECT_THROW(parse_model_spec("{"), ModelError);
  EXPECT_THROW(parse_model_spec(R"({"levels": []})"), ModelError);
  EXPECT_THROW(parse_model_spec(
                   R"({"levels": [{"energy": 0}], "couplings": [[0, 1]], "registers": [0],
                       "target": [[[1, 0]]]})"),
               ModelError);
  EXPECT_THROW(parse_model_spec(
                   R"({"levels": [{"energy": "x"}], "couplings": [], "registers": [0],
                       "target": [[[1, 0]]]})"),
               ModelError);
}

TEST(CustomModel, DefaultCarrierIsLowestRegisterTransition) {
  ModelSpec spec;
  spec.levels = {{"g0", 0.0}, {"g1", 1.0}, {"e0", 10.0}, {"e1", 12.0}};
  spec.couplings = {{0, 2, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}};
  spec.registers = {0, 1};
  spec.target = CMatrix::Identity(2, 2);
  EXPECT_DOUBLE_EQ(build_custom_model(spec).model.carrier_frequency(), 9.0);
}

}  // namespace
}  // namespace kgate
