// Copyright 2026 The isac-region Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

namespace isac {
namespace {

SystemConfig lmmse_example() {
  SystemConfig c;
  c.tx_antennas = 2;
  c.sense_rx = 2;
  c.coherence = 4;
  c.noise_var_s = 0.1;
  c.alpha_s = 0.5;
  c.chan_var_s = 0.5;
  c.power = 1.0;
  return c;
}

// Linear MMSE of the realized channel vector computed directly from its
// second moments: prior alpha sigma_H^2 / 2 and noise sigma^2 / 2 per real
// component, observation y = C_X h + z.
double realized_lmmse(const SystemConfig& c, const Waveform& w) {
  const RMatrix op = build_sensing_operator(w, c.sense_rx).dense();
  const auto n = op.cols();
  const RMatrix prior = 0.5 * c.alpha_s * c.chan_var_s * RMatrix::Identity(n, n);
  const RMatrix cov = op * prior * op.transpose() + 0.5 * c.noise_var_s * RMatrix::Identity(op.rows(), op.rows());
  const RMatrix gain = prior * op.transpose() * cov.ldlt().solve(RMatrix::Identity(op.rows(), op.rows()));
  return (prior - gain * op * prior).trace();
}

Waveform orthogonal_block(int m, int t, double p0) {
  // Rows are orthogonal with squared norm t p0, so X X^H / t = p0 I.
  CMatrix x = CMatrix::Zero(m, t);
  for (int j = 0; j < t; ++j) x(j % m, j) = std::sqrt(p0 * m);
  return Waveform::from_block(x);
}

TEST(Poincare, ReferenceConfigValue) {
  const SystemConfig c;
  const std::vector<double> traces(100, c.total_power());
  const auto b = poincare_bound(traces, c);
  const double expected = c.alpha_s * c.noise_var_s / (2.0 * c.total_power());
  EXPECT_NEAR(b.value / expected, 1.0, 1e-10);
  EXPECT_NEAR(b.value, 1.9905e-4, 1e-8);
  EXPECT_EQ(b.std_error, 0.0);
  EXPECT_EQ(b.kind, BoundKind::poincare);
}

TEST(Poincare, LinearInAlphaAndNoise) {
  SystemConfig c;
  const std::vector<double> traces{1.0, 2.0, 5.0, 3.5};
  const double base = poincare_bound(traces, c).value;
  c.alpha_s *= 0.5;
  EXPECT_NEAR(poincare_bound(traces, c).value, 0.5 * base, 1e-18);
  c.noise_var_s *= 3.0;
  EXPECT_NEAR(poincare_bound(traces, c).value, 1.5 * base, 1e-18);
  c.alpha_s = 1e-12;
  EXPECT_LT(poincare_bound(traces, c).value, 1e-12);
}

TEST(Poincare, JensenLowerEnvelope) {
  const SystemConfig c;
  const std::vector<double> traces{1.0, 2.0, 5.0, 3.5, 0.4};
  double mean = 0.0;
  for (double t : traces) mean += t / traces.size();
  EXPECT_GE(poincare_bound(traces, c).value, c.alpha_s * c.noise_var_s / (2.0 * mean));
  EXPECT_THROW(poincare_bound(std::vector<double>{1.0, 0.0}, c), NumericalError);
}

TEST(Lmmse, ExampleValueAgainstRealizedOracle) {
  const auto c = lmmse_example();
  const auto w = orthogonal_block(2, 4, 1.0);
  ASSERT_LT((w.sample_covariance() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  const std::vector<CMatrix> rx{w.sample_covariance()};
  const auto b = lmmse_bound(rx, c);
  EXPECT_NEAR(b.value / realized_lmmse(c, w), 1.0, 1e-12);
  EXPECT_NEAR(b.value, 0.05 * 2.0 / 1.1, 1e-12);
  EXPECT_NEAR(lmmse_normalized(b, c).value, 0.05 * 2.0 / 1.1 / 4.0, 1e-12);
}

TEST(Lmmse, MatchesRealizedOracleOnRandomWaveforms) {
  auto c = lmmse_example();
  c.coherence = 5;
  RngStream rng(61);
  for (int i = 0; i < 20; ++i) {
    const auto w = Waveform::from_block(complex_gaussian_matrix(2, 5, 0.7, rng));
    const std::vector<CMatrix> rx{w.sample_covariance()};
    EXPECT_NEAR(lmmse_bound(rx, c).value / realized_lmmse(c, w), 1.0, 1e-10);
  }
}

TEST(Lmmse, LimitsAndMonotonicity) {
  auto c = lmmse_example();
  const CMatrix r = CMatrix::Identity(2, 2);
  const std::vector<CMatrix> rx{r};
  const std::vector<CMatrix> bigger{r + 0.5 * CMatrix::Identity(2, 2)};
  const std::vector<CMatrix> huge{1e8 * r};
  EXPECT_LE(lmmse_bound(bigger, c).value, lmmse_bound(rx, c).value);
  EXPECT_LT(lmmse_bound(huge, c).value, 1e-8);
  c.noise_var_s = 1e-6;
  // N_s sigma^2 / T * M / P0 to first order in sigma^2.
  EXPECT_NEAR(lmmse_bound(rx, c).value / 1e-6, 1.0, 1e-5);

  CMatrix bad = r;
  bad(0, 1) = 1.0;
  EXPECT_THROW(lmmse_bound(std::vector<CMatrix>{bad}, c), NumericalError);
}

TEST(Lmmse, NormalizedEdgeCases) {
  auto c = lmmse_example();
  const SensingBound zero{0.0, 0.0, BoundKind::lmmse, 1};
  EXPECT_EQ(lmmse_normalized(zero, c).value, 0.0);
  c.tx_antennas = c.sense_rx = 1;
  const SensingBound b{0.3, 0.01, BoundKind::lmmse, 1};
  EXPECT_EQ(lmmse_normalized(b, c).value, 0.3);
  EXPECT_THROW(lmmse_normalized(poincare_bound(std::vector<double>{1.0}, c), c), NumericalError);
}

TEST(Oracle, GaussianCaseEqualsLmmse) {
  auto c = lmmse_example();
  c.alpha_s = 1.0;
  c.mc_outer = 4000;
  const auto policy = sensing_optimal_policy(c);
  const auto o = mmse_oracle(c, policy, RngStream(62));
  // Sensing-optimal waveform has R_x = P0 I, so the Gaussian MMSE is a constant.
  const std::vector<CMatrix> rx{c.power * CMatrix::Identity(2, 2)};
  const double exact = lmmse_bound(rx, c).value;
  EXPECT_TRUE(test::within_sigmas(o.value, exact, o.std_error)) << o.value << " vs " << exact;
  RngStream wr(63);
  EXPECT_NEAR(realized_lmmse(c, policy(wr)) / exact, 1.0, 1e-10);
}

TEST(Oracle, VanishingPriorMass) {
  auto c = lmmse_example();
  c.alpha_s = 1e-6;
  c.mc_outer = 2000;
  const auto o = mmse_oracle(c, sensing_optimal_policy(c), RngStream(64));
  EXPECT_TRUE(test::within_sigmas(o.value, 0.0, o.std_error) || o.value < 1e-6) << o.value;
}

TEST(Oracle, SitsBetweenBoundsOnReferenceConfig) {
  auto c = test::small_config(3000);
  const auto policy = sensing_optimal_policy(c);
  const auto o = mmse_oracle(c, policy, RngStream(65));
  const double p = c.alpha_s * c.noise_var_s / (2.0 * c.total_power());
  const double l = lmmse_bound(std::vector<CMatrix>{c.power * CMatrix::Identity(4, 4)}, c).value;
  EXPECT_LE(p, o.value + 3.0 * o.std_error);
  EXPECT_LE(o.value, l + 3.0 * o.std_error);
}

TEST(Oracle, SlopeAboveThePoincareSlope) {
  auto c = lmmse_example();
  c.mc_outer = 2000;
  const double poincare_slope = c.alpha_s / (2.0 * c.total_power());
  std::vector<double> slopes;
  for (double s2 : {1e-2, 1e-3, 1e-4}) {
    c.noise_var_s = s2;
    const auto o = mmse_oracle(c, sensing_optimal_policy(c), RngStream(66));
    slopes.push_back(o.value / s2);
    EXPECT_GE(o.value / s2 + 3.0 * o.std_error / s2, poincare_slope);
  }
  // Successive slope changes shrink, so the ratio settles to a finite limit.
  EXPECT_LE(std::abs(slopes[2] - slopes[1]), std::abs(slopes[1] - slopes[0]) + 0.05 * slopes[2]);
}

TEST(Oracle, ScaleCap) {
  auto c = test::small_config(10);
  c.oracle_cap = 8;
  EXPECT_THROW(mmse_oracle(c, sensing_optimal_policy(c), RngStream(67)), OracleScaleError);
}

}  // namespace
}  // namespace isac
