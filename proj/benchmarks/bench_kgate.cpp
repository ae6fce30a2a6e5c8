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

#include <benchmark/benchmark.h>

#include <cmath>

#include "kgate/analysis.hpp"
#include "kgate/dynamics.hpp"
#include "kgate/models.hpp"
#include "kgate/optimizer.hpp"

namespace {

using namespace kgate;

void BM_StepExponential(benchmark::State& state) {
  const auto [model, target] = build_hadamard_model();
  const Operator h = Operator::hermitian(model.generator(0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm_hermitian_step(h, 0.01, StepSign::forward));
  }
}
BENCHMARK(BM_StepExponential);

void BM_SpectrumReuse(benchmark::State& state) {
  const auto [model, target] = build_hadamard_model();
  const HermitianSpectrum spec(model.generator(0.3));
  for (auto _ : state) benchmark::DoNotOptimize(spec.exponential(0.01));
}
BENCHMARK(BM_SpectrumReuse);

void BM_ForwardHadamard(benchmark::State& state) {
  const auto [model, target] = build_hadamard_model();
  const ControlField field = guess_field(70.0, static_cast<std::size_t>(state.range(0)), 15.0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_final(model, field));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardHadamard)->Arg(1000)->Arg(7000)->Unit(benchmark::kMillisecond);

void BM_ForwardQft(benchmark::State& state) {
  const auto [model, target] = build_qft_model();
  const ControlField field = guess_field(320.0, 4000, 15.0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_final(model, field));
  state.SetItemsProcessed(state.iterations() * 4000);
}
BENCHMARK(BM_ForwardQft)->Unit(benchmark::kMillisecond);

void BM_KrotovIterationHadamard(benchmark::State& state) {
  const auto [model, target] = build_hadamard_model();
  OptimizerConfig config(guess_field(70.0, 7000, 15.0));
  config.lambda = 0.05;
  const Trajectory b = propagate_backward(model, config.guess, target.b_terminal());
  for (auto _ : state) {
    benchmark::DoNotOptimize(krotov_iteration(model, target, config.guess, b, config));
  }
}
BENCHMARK(BM_KrotovIterationHadamard)->Unit(benchmark::kMillisecond);

void BM_FieldSpectrum(benchmark::State& state) {
  const ControlField field = guess_field(320.0, static_cast<std::size_t>(state.range(0)), 15.0);
  for (auto _ : state) benchmark::DoNotOptimize(field_spectrum(field));
}
BENCHMARK(BM_FieldSpectrum)->Arg(16000)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
