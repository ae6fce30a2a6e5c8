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
#include <limits>
#include <numbers>
#include <random>

#include "kgate/dynamics.hpp"
#include "kgate/models.hpp"
#include "kgate/optimizer.hpp"
#include "test_support.hpp"

namespace kgate {
namespace {

using testing::max_abs_diff;
using testing::random_model;
using testing::random_samples;

constexpr Complex I(0.0, 1.0);

ModelSystem two_level(double omega, double mu0) {
  CMatrix h0 = CMatrix::Zero(2, 2);
  h0(1, 1) = omega;
  CMatrix mu = CMatrix::Zero(2, 2);
  mu(0, 1) = mu(1, 0) = mu0;
  return ModelSystem(Operator::hermitian(h0), Operator::hermitian(mu), {0, 1}, {}, omega);
}

ControlField tone(double t_final, std::size_t n, double amplitude, double omega) {
  ControlField f = ControlField::zero(t_final, n);
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = amplitude * std::cos(omega * f.midpoint(k));
  return f.with_samples(std::move(s));
}

TEST(Shape, AnalyticShapes) {
  const Shape s = Shape::sin2_2pi();
  EXPECT_NEAR(s(17.5, 70.0), 1.0, 1e-15);
  EXPECT_NEAR(s(35.0, 70.0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(s(0.0, 70.0), 0.0);
  EXPECT_EQ(s.name(), "paper-sin2-2pi");
  const Shape p = Shape::sin2_pi();
  EXPECT_NEAR(p(35.0, 70.0), 1.0, 1e-15);
  EXPECT_EQ(p.name(), "sin2-pi");
}

TEST(Shape, TableInterpolatesAndIsZeroOutside) {
  const Shape t = Shape::table({{0.0, 0.0}, {1.0, 1.0}, {3.0, 0.0}});
  EXPECT_DOUBLE_EQ(t(0.5, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(t(2.0, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(t(-1.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(t(4.0, 3.0), 0.0);
  EXPECT_THROW(Shape::table({{0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Shape::table({{0.0, 1.0}, {0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Shape::table({{0.0, 1.0}, {1.0, -1.0}}), std::invalid_argument);
}

TEST(ControlField, GridAndValidation) {
  const ControlField f = ControlField::zero(10.0, 4);
  EXPECT_DOUBLE_EQ(f.dt(), 2.5);
  EXPECT_DOUBLE_EQ(f.midpoint(0), 1.25);
  EXPECT_DOUBLE_EQ(f.midpoint(3), 8.75);
  EXPECT_THROW(ControlField(0.0, {1.0}), std::invalid_argument);
  EXPECT_THROW(ControlField(1.0, {}), std::invalid_argument);
  EXPECT_THROW(ControlField(1.0, {1.0, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
  EXPECT_THROW(ControlField(1.0, {std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
  EXPECT_THROW(f.with_samples({1.0}), std::invalid_argument);
}

TEST(PropagateForward, FreeEvolutionIsDiagonalPhase) {
  std::mt19937_64 rng(31);
  const ModelSystem model = random_model(6, {0, 1}, rng);
  const double t = 7.3;
  const Trajectory u = propagate_forward(model, ControlField::zero(t, 50));
  CMatrix expected = CMatrix::Zero(6, 6);
  for (Index k = 0; k < 6; ++k) expected(k, k) = std::exp(-I * model.h0()(k, k).real() * t);
  EXPECT_LE(max_abs_diff(u.final_operator(), expected), 1e-12);
  EXPECT_LE(max_abs_diff(u.initial_operator(), CMatrix::Identity(6, 6)), 0.0);
}

TEST(PropagateForward, ResonantPiPulseTransfersPopulation) {
  const double omega = 5.0;
  const double mu0 = 1.0;
  const double t = 10.0;
  const double amplitude = std::numbers::pi / (mu0 * t);
  const ModelSystem model = two_level(omega, mu0);
  const CMatrix u = propagate_final(model, tone(t, 4000, amplitude, omega));
  EXPECT_NEAR(std::norm(u(1, 0)), 1.0, 2e-2);
  const CMatrix fine = propagate_final(model, tone(t, 40000, amplitude, omega));
  EXPECT_NEAR(std::norm(u(1, 0)), std::norm(fine(1, 0)), 1e-5);
}

TEST(PropagateForward, HadamardGuessCheckpointsAreUnitary) {
  const auto [model, target] = build_hadamard_model();
  const ControlField guess = guess_field(70.0, 7000, 15.0);
  PropagationOptions opts;
  opts.stride = 100;
  const Trajectory u = propagate_forward(model, guess, opts);
  ASSERT_EQ(u.checkpoint_count(), 71u);
  for (std::size_t i = 0; i < u.checkpoint_count(); ++i) {
    EXPECT_EQ(u.checkpoint_index(i), 100 * i);
    EXPECT_LE(unitarity_defect(u.checkpoint(i)), 1e-10) << "checkpoint " << i;
  }
}

TEST(PropagateForward, ReusedKernelsGiveIdenticalResult) {
  std::mt19937_64 rng(32);
  const ModelSystem model = random_model(5, {0, 1}, rng);
  const ControlField f(4.0, random_samples(300, rng));
  const StepKernels kernels(model, f);
  PropagationOptions opts;
  opts.kernels = &kernels;
  const Trajectory a = propagate_forward(model, f);
  const Trajectory b = propagate_forward(model, f, opts);
  EXPECT_TRUE(a.final_operator() == b.final_operator());
  EXPECT_LE(max_abs_diff(propagate_final(model, f), a.final_operator()), 1e-14);
  const ControlField other(4.0, random_samples(200, rng));
  opts.kernels = &kernels;
  EXPECT_THROW(propagate_forward(model, other, opts), std::invalid_argument);
}

TEST(PropagateForward, MatchesExtendedPrecisionReference) {
  std::mt19937_64 rng(33);
  for (bool complex_dipole : {false, true}) {
    const ModelSystem model = random_model(4, {0, 1}, rng, 3.0, 0.5, complex_dipole);
    const std::vector<double> s = random_samples(200, rng);
    const CMatrix u = propagate_final(model, ControlField(3.0, s));
    const testing::LMatrix ref = testing::reference_propagate(model, s, 3.0);
    double worst = 0.0;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        worst = std::max(worst, static_cast<double>(std::abs(
                                    testing::LComplex(u(i, j)) - ref(i, j))));
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(PropagateBackward, ConstantGeneratorClosedForm) {
  std::mt19937_64 rng(34);
  const CMatrix h = testing::random_hermitian(4, rng);
  const ModelSystem model(Operator::hermitian(h), Operator::zero(4), {0}, {}, 1.0);
  const double t = 2.7;
  const Trajectory b = propagate_backward(model, ControlField::zero(t, 40), Operator::identity(4));
  const CMatrix expected =
      expm_hermitian_step(Operator::hermitian(h), t, StepSign::forward).matrix();
  EXPECT_LE(max_abs_diff(b.final_operator(), expected), 1e-12);
  // B(t) = exp(-iH(T - t)).
  const CMatrix mid =
      expm_hermitian_step(Operator::hermitian(h), t / 2, StepSign::forward).matrix();
  EXPECT_LE(max_abs_diff(b.at(20), mid), 1e-12);
}

TEST(PropagateBackward, IdentityTerminalGivesUTUdagger) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const ModelSystem model = random_model(5, {0, 1}, rng);
    const ControlField f(5.0, random_samples(400, rng, 2.0));
    const Trajectory u = propagate_forward(model, f);
    const Trajectory b = propagate_backward(model, f, Operator::identity(5));
    const CMatrix& ut = u.final_operator();
    for (std::size_t j = 0; j <= f.n_steps(); j += 37) {
      EXPECT_LE(max_abs_diff(b.at(j), ut * u.at(j).adjoint()), 1e-9);
    }
    EXPECT_LE(max_abs_diff(b.initial_operator(), CMatrix::Identity(5, 5)), 0.0);
  }
}

TEST(PropagateBackward, DiagonalStaysDiagonal) {
  std::mt19937_64 rng(36);
  const ModelSystem model = random_model(4, {0}, rng);
  CMatrix bt = CMatrix::Zero(4, 4);
  for (Index k = 0; k < 4; ++k) bt(k, k) = std::exp(I * static_cast<double>(k));
  const Trajectory b = propagate_backward(model, ControlField::zero(3.0, 30), Operator::unitary(bt));
  CMatrix off = b.final_operator();
  off.diagonal().setZero();
  EXPECT_LE(off.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PropagateBackward, TerminalDimensionMismatchThrows) {
  std::mt19937_64 rng(37);
  const ModelSystem model = random_model(3, {0}, rng);
  EXPECT_THROW(propagate_backward(model, ControlField::zero(1.0, 5), Operator::identity(4)),
               DimensionError);
}

TEST(Propagation, JointTraceIsConserved) {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 5; ++trial) {
    const ModelSystem model = random_model(6, {0, 1, 2}, rng, 4.0, 0.7, trial % 2 == 1);
    const ControlField f(6.0, random_samples(500, rng, 1.5));
    const Operator bt = Operator::unitary(testing::random_unitary(6, rng));
    const Trajectory u = propagate_forward(model, f);
    const Trajectory b = propagate_backward(model, f, bt);
    const Complex ref = (b.at(0) * u.at(0)).trace();
    for (std::size_t j = 0; j <= f.n_steps(); ++j) {
      EXPECT_LE(std::abs((b.at(j) * u.at(j)).trace() - ref), 1e-9 * std::abs(ref));
    }
  }
}

TEST(Propagation, BackwardKernelsUndoForwardRun) {
  std::mt19937_64 rng(39);
  const ModelSystem model = random_model(5, {0, 1}, rng);
  const ControlField f(4.0, random_samples(300, rng));
  Operator u = Operator::unitary(propagate_final(model, f));
  for (std::size_t k = f.n_steps(); k-- > 0;) {
    const Operator h = Operator::hermitian(model.generator(f[k]));
    u = expm_hermitian_step(h, f.dt(), StepSign::backward) * u;
  }
  EXPECT_LE(max_abs_diff(u.matrix(), CMatrix::Identity(5, 5)), 1e-9);
}

TEST(Propagation, HalvingStepIsSecondOrder) {
  std::mt19937_64 rng(40);
  const ModelSystem model = random_model(4, {0, 1}, rng);
  auto run = [&](std::size_t n) {
    ControlField f = ControlField::zero(5.0, n);
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = f.midpoint(k);
      s[k] = std::sin(1.3 * t) + 0.5 * std::cos(2.9 * t);
    }
    return propagate_final(model, f.with_samples(std::move(s)));
  };
  const CMatrix u1 = run(200);
  const CMatrix u2 = run(400);
  const CMatrix u4 = run(800);
  const double order = std::log2((u1 - u2).norm() / (u2 - u4).norm());
  EXPECT_GE(order, 1.8);
  EXPECT_LE(order, 2.2);
}

TEST(Trajectory, ThinnedStorageMatchesFullStorage) {
  std::mt19937_64 rng(41);
  const ModelSystem model = random_model(3, {0, 1}, rng);
  const std::size_t n = PropagationOptions::kFullStorageLimit + 5000;
  const ControlField f(10.0, random_samples(n, rng));
  const Trajectory thin = propagate_forward(model, f);
  EXPECT_GT(thin.stride(), 1u);
  EXPECT_LT(thin.checkpoint_count(), n + 1);
  PropagationOptions full_opts;
  full_opts.stride = 1;
  const Trajectory full = propagate_forward(model, f, full_opts);
  ASSERT_EQ(full.checkpoint_count(), n + 1);
  for (std::size_t j : {std::size_t{0}, std::size_t{1}, std::size_t{777}, n / 2 + 3, n - 1, n}) {
    EXPECT_LE(max_abs_diff(thin.at(j), full.at(j)), 1e-12) << j;
  }
  EXPECT_EQ(thin.checkpoint_index(thin.checkpoint_count() - 1), n);
  EXPECT_THROW(thin.at(n + 1), std::out_of_range);
}

TEST(DefaultSteps, HundredStepsPerFastestPeriod) {
  const auto [model, target] = build_hadamard_model();
  const double width = 18.6;
  EXPECT_NEAR(model.spectral_width(), width, 1e-12);
  const std::size_t expected =
      static_cast<std::size_t>(std::ceil(100.0 * 70.0 * width / (2 * std::numbers::pi)));
  EXPECT_EQ(default_n_steps(model, 70.0), expected);
}

}  // namespace
}  // namespace kgate
