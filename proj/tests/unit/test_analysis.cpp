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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kgate/analysis.hpp"
#include "test_support.hpp"

namespace kgate {
namespace {

constexpr double kPi = std::numbers::pi;

ControlField tone(std::size_t n, double t_final, int bin) {
  const double omega = 2 * kPi * bin / t_final;
  ControlField f = ControlField::zero(t_final, n);
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = std::cos(omega * f.midpoint(k));
  return f.with_samples(std::move(s));
}

// |X_m| by direct summation, normalized like field_spectrum.
std::vector<double> naive_magnitudes(const std::vector<double>& x) {
  const std::size_t m = x.size();
  std::vector<double> mags(m / 2 + 1);
  for (std::size_t b = 0; b < mags.size(); ++b) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::size_t k = 0; k < m; ++k) {
      const long double ph = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(b * k % m) /
                             static_cast<long double>(m);
      re += x[k] * std::cos(ph);
      im += x[k] * std::sin(ph);
    }
    double mag = static_cast<double>(std::sqrt(re * re + im * im)) / std::sqrt(static_cast<double>(m));
    const bool self_conjugate = b == 0 || (m % 2 == 0 && b == m / 2);
    if (!self_conjugate) mag *= std::sqrt(2.0);
    mags[b] = mag;
  }
  return mags;
}

TEST(FieldSpectrum, ZeroFieldHasZeroMagnitudes) {
  const Spectrum s = field_spectrum(ControlField::zero(10.0, 64));
  ASSERT_EQ(s.magnitudes.size(), 33u);
  for (double m : s.magnitudes) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(band_energy_fraction(s, 0.0, 100.0), 0.0);
}

TEST(FieldSpectrum, FrequencyGrid) {
  const ControlField f = ControlField::zero(8.0, 100);
  const Spectrum s = field_spectrum(f);
  EXPECT_DOUBLE_EQ(s.frequencies[0], 0.0);
  EXPECT_NEAR(s.frequencies[1], 2 * kPi / 8.0, 1e-15);
  EXPECT_NEAR(s.frequencies.back(), kPi / f.dt(), 1e-12);
  const Spectrum odd = field_spectrum(ControlField::zero(8.0, 101));
  EXPECT_LT(odd.frequencies.back(), kPi / (8.0 / 101));
}

TEST(FieldSpectrum, PureToneHasSinglePeak) {
  const ControlField f = tone(512, 20.0, 37);
  const Spectrum s = field_spectrum(f);
  const auto peak = std::max_element(s.magnitudes.begin(), s.magnitudes.end());
  EXPECT_EQ(peak - s.magnitudes.begin(), 37);
  EXPECT_NEAR(s.frequencies[37], 2 * kPi * 37 / 20.0, 1e-12);
  for (std::size_t b = 0; b < s.magnitudes.size(); ++b) {
    if (b != 37) EXPECT_LE(s.magnitudes[b], 1e-10 * *peak) << b;
  }
  const double omega = s.frequencies[37];
  EXPECT_GE(band_energy_fraction(s, omega - 1.0, omega + 1.0), 0.99);
}

TEST(FieldSpectrum, ParsevalAndNaiveOracle) {
  std::mt19937_64 rng(81);
  for (std::size_t n : {std::size_t{64}, std::size_t{101}, std::size_t{250}}) {
    const std::vector<double> x = testing::random_samples(n, rng);
    const Spectrum s = field_spectrum(ControlField(3.0, x));
    double energy = 0.0;
    for (double v : x) energy += v * v;
    double spec_energy = 0.0;
    for (double m : s.magnitudes) spec_energy += m * m;
    EXPECT_NEAR(spec_energy, energy, 1e-9 * energy);
    EXPECT_NEAR(s.total_energy, energy, 1e-9 * energy);
    const std::vector<double> oracle = naive_magnitudes(x);
    ASSERT_EQ(oracle.size(), s.magnitudes.size());
    for (std::size_t b = 0; b < oracle.size(); ++b) EXPECT_NEAR(s.magnitudes[b], oracle[b], 1e-12);
  }
}

TEST(FieldSpectrum, TimeReversalKeepsMagnitudes) {
  std::mt19937_64 rng(82);
  std::vector<double> x = testing::random_samples(300, rng);
  const Spectrum a = field_spectrum(ControlField(5.0, x));
  std::reverse(x.begin(), x.end());
  const Spectrum b = field_spectrum(ControlField(5.0, x));
  for (std::size_t k = 0; k < a.magnitudes.size(); ++k) {
    EXPECT_NEAR(a.magnitudes[k], b.magnitudes[k], 1e-12);
  }
}

TEST(FieldSpectrum, PaddingAndWindow) {
  const ControlField f = tone(256, 10.0, 20);
  SpectrumOptions pad;
  pad.pad_factor = 4;
  const Spectrum s = field_spectrum(f, pad);
  EXPECT_EQ(s.magnitudes.size(), 4 * 256 / 2 + 1);
  EXPECT_NEAR(s.frequencies[1], 2 * kPi / 40.0, 1e-15);
  double energy = 0.0;
  for (double v : f.samples()) energy += v * v;
  EXPECT_NEAR(s.total_energy, energy, 1e-9 * energy);

  SpectrumOptions hann;
  hann.hann_window = true;
  const Spectrum w = field_spectrum(f, hann);
  const auto peak = std::max_element(w.magnitudes.begin(), w.magnitudes.end());
  EXPECT_EQ(peak - w.magnitudes.begin(), 20);
  EXPECT_GT(w.magnitudes[19], 0.1 * *peak);

  SpectrumOptions bad;
  bad.pad_factor = 0;
  EXPECT_THROW(field_spectrum(f, bad), std::invalid_argument);
  EXPECT_THROW(field_spectrum(ControlField::zero(1.0, 1)), std::invalid_argument);
}

TEST(BandEnergyFraction, LimitsAndMonotonicity) {
  std::mt19937_64 rng(83);
  const Spectrum s = field_spectrum(ControlField(5.0, testing::random_samples(200, rng)));
  EXPECT_NEAR(band_energy_fraction(s, 0.0, s.frequencies.back()), 1.0, 1e-15);
  EXPECT_EQ(band_energy_fraction(s, s.frequencies.back() + 1.0, s.frequencies.back() + 2.0), 0.0);
  EXPECT_THROW(band_energy_fraction(s, 3.0, 3.0), std::invalid_argument);
  EXPECT_THROW(band_energy_fraction(s, 4.0, 3.0), std::invalid_argument);
  const double mid = s.frequencies.back() / 2;
  double prev = 0.0;
  for (double half = 0.5; half < mid; half *= 1.5) {
    const double f = band_energy_fraction(s, mid - half, mid + half);
    EXPECT_GE(f, prev);
    prev = f;
  }
}

IterationRecord record(std::size_t it, double j, double fidelity) {
  IterationRecord r;
  r.iteration = it;
  r.j = j;
  r.fidelity = fidelity;
  r.leakage = 1 - fidelity;
  return r;
}

TEST(ConvergenceSummary, EmptyListHasNoValues) {
  const ConvergenceSummary s = convergence_summary(std::vector<IterationRecord>{});
  EXPECT_FALSE(s.iterations);
  EXPECT_FALSE(s.iterations_to_threshold);
  EXPECT_FALSE(s.final_fidelity);
  EXPECT_FALSE(s.final_leakage);
  EXPECT_FALSE(s.final_j);
  EXPECT_EQ(s.monotonicity_violations, 0u);
}

TEST(ConvergenceSummary, CountsThresholdAndViolations) {
  const std::vector<IterationRecord> up = {record(1, 0.5, 0.3), record(2, 1.0, 0.6),
                                           record(3, 1.9, 0.995), record(4, 1.95, 0.999)};
  const ConvergenceSummary s = convergence_summary(up);
  EXPECT_EQ(*s.iterations, 4u);
  EXPECT_EQ(*s.iterations_to_threshold, 3u);
  EXPECT_DOUBLE_EQ(*s.final_fidelity, 0.999);
  EXPECT_DOUBLE_EQ(*s.final_j, 1.95);
  EXPECT_EQ(s.monotonicity_violations, 0u);

  const std::vector<IterationRecord> bumpy = {record(1, 1.0, 0.5), record(2, 0.9, 0.45),
                                              record(3, 0.9 - 1e-11, 0.45), record(4, 0.8, 0.4)};
  EXPECT_EQ(convergence_summary(bumpy).monotonicity_violations, 2u);

  OptimizationReport report{record(0, 1.2, 0.6), bumpy, ControlField::zero(1.0, 2),
                            CMatrix::Identity(2, 2), RunStatus::max_iterations};
  EXPECT_EQ(convergence_summary(report).monotonicity_violations, 3u);
}

}  // namespace
}  // namespace kgate
