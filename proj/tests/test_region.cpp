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
#include <limits>
#include <vector>

#include "test_support.hpp"

namespace isac {
namespace {

TEST(Region, CornersShareEpsUnderShortTermBudget) {
  const auto c = test::small_config(2000);
  const auto k = corner_points(c, RngStream(71));
  EXPECT_NEAR(k.sense_corner.eps, k.comm_corner.eps, 1e-12 * k.sense_corner.eps);
  EXPECT_NEAR(k.sense_corner.eps / 1.9905358527674868e-4, 1.0, 1e-10);
  EXPECT_EQ(k.sense_corner.policy, Policy::sense_opt);
  EXPECT_EQ(k.comm_corner.policy, Policy::comm_opt);
  EXPECT_TRUE(std::isinf(k.comm_corner.lambda));
  EXPECT_GE(k.comm_corner.rate, k.sense_corner.rate);
}

TEST(Region, SweepEndpointsMatchCorners) {
  const auto c = test::small_config(1000);
  const RngStream rng(72);
  const auto k = corner_points(c, rng);
  const auto sweep = pareto_sweep(c, SweepSpec{}, rng);
  ASSERT_EQ(sweep.size(), 6u);
  const auto& first = sweep.front();
  const auto& last = sweep.back();
  EXPECT_EQ(first.lambda, 0.0);
  EXPECT_NEAR(first.rate, k.sense_corner.rate, 1e-12);
  EXPECT_NEAR(first.eps, k.sense_corner.eps, 1e-12);
  EXPECT_EQ(last.lambda, 100.0);
  EXPECT_NEAR(last.rate, k.comm_corner.rate, 1e-12);
  EXPECT_NEAR(last.eps, k.comm_corner.eps, 1e-12);
}

TEST(Region, SweepIsMonotone) {
  auto c = test::small_config(1000);
  c.noise_var_c = 0.3;
  const auto sweep = pareto_sweep(c, SweepSpec{}, RngStream(73));
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_GE(sweep[i].lambda, sweep[i - 1].lambda);
    EXPECT_GE(sweep[i].rate, sweep[i - 1].rate);
    EXPECT_GE(sweep[i].eps + 3.0 * sweep[i].eps_stderr + 1e-15, sweep[i - 1].eps);
  }
}

TEST(Region, IndependentStreamsStillNearRectangular) {
  const auto c = test::small_config(1000);
  SweepSpec spec;
  spec.common_random_numbers = false;
  const RngStream rng(74);
  const auto r = assemble_region(c, spec, rng);
  for (const auto& p : r.sweep) EXPECT_LE(std::abs(p.eps - r.converse.eps_min), 3.0 * p.eps_stderr + 1e-15);
  EXPECT_TRUE(region_violations(r).empty());
}

TEST(Region, TimeSharingGeometry) {
  TradeoffPoint s, k;
  s.rate = 10.0;
  s.eps = 1.0;
  s.raw_rate = 10.0;
  k.rate = 14.0;
  k.eps = 3.0;
  k.raw_rate = 14.0;
  const auto seg = time_sharing_segment(s, k, 5);
  ASSERT_EQ(seg.size(), 5u);
  EXPECT_EQ(seg.front().rate, k.rate);
  EXPECT_EQ(seg.front().eps, k.eps);
  EXPECT_EQ(seg.back().rate, s.rate);
  EXPECT_EQ(seg.back().eps, s.eps);
  EXPECT_DOUBLE_EQ(seg[2].rate, 12.0);
  EXPECT_DOUBLE_EQ(seg[2].eps, 2.0);
  for (const auto& p : seg) {
    const double line = s.eps + (k.eps - s.eps) / (k.rate - s.rate) * (p.rate - s.rate);
    EXPECT_NEAR(p.eps, line, 1e-9);
    EXPECT_EQ(p.policy, Policy::time_share);
  }
  const auto flat = time_sharing_segment(s, s, 3);
  for (const auto& p : flat) {
    EXPECT_EQ(p.rate, s.rate);
    EXPECT_EQ(p.eps, s.eps);
  }
  EXPECT_THROW(time_sharing_segment(s, k, 1), ConfigError);
}

// With M = N_c = T = 1 and no blockage every admissible policy sends the full
// power P0, so the isotropic, water-filled and any time-shared policy all land
// on the same (eps, R) pair.
TEST(Region, ScalarInstanceMatchesEnumeration) {
  SystemConfig c;
  c.tx_antennas = c.sense_rx = c.comm_rx = c.coherence = 1;
  c.alpha_s = c.alpha_c = 1.0;
  c.chan_var_s = 1.0;
  c.mc_outer = 5000;
  const RngStream rng(75);
  const auto r = assemble_region(c, SweepSpec{}, rng);
  const CovariancePolicy full = [&](const CMatrix&) { return c.power * CMatrix::Identity(1, 1); };
  const std::vector<CovariancePolicy> policies{isotropic_policy(c), water_filling_policy(c), full};
  for (const auto& pol : policies) {
    const auto rate = ergodic_rate_logdet(c, pol, rng);
    const double eps = c.alpha_s * c.noise_var_s / (2.0 * c.power);
    EXPECT_NEAR(rate.value, r.converse.rate_max, 1e-9);
    EXPECT_NEAR(eps, r.converse.eps_min, 1e-15);
    for (const auto& p : r.sweep) {
      EXPECT_NEAR(p.rate, rate.value, 1e-9);
      EXPECT_NEAR(p.eps, eps, 1e-15);
    }
  }
}

TEST(Region, EmptySweepKeepsCorners) {
  const auto c = test::small_config(500);
  SweepSpec spec;
  spec.lambdas.clear();
  const auto r = assemble_region(c, spec, RngStream(76));
  EXPECT_TRUE(r.sweep.empty());
  EXPECT_EQ(r.converse.eps_min, r.sense_corner.eps);
  EXPECT_EQ(r.converse.rate_max, r.comm_corner.rate);
  EXPECT_EQ(r.timeshare.size(), static_cast<std::size_t>(spec.timeshare_points));
  const auto csv = io::region_csv(r, true);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Region, RejectsBadSweep) {
  SweepSpec spec;
  spec.lambdas = {1.0, -1.0};
  EXPECT_THROW(validate_sweep(spec), ConfigError);
  spec.lambdas = {std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(validate_sweep(spec), ConfigError);
}

TEST(Region, BindingSensingConstraintIsReported) {
  auto c = test::small_config(200);
  c.eps_alpha = 1e-5;
  EXPECT_THROW(assemble_region(c, SweepSpec{}, RngStream(77)), NumericalError);
  c.eps_alpha = 1.0;
  EXPECT_NO_THROW(assemble_region(c, SweepSpec{}, RngStream(77)));
}

TEST(Region, FiniteTModeKeepsClippedAndRawRates) {
  auto c = test::small_config(200);
  c.rate_mode = RateMode::finite_t;
  const auto k = corner_points(c, RngStream(78));
  EXPECT_GE(k.sense_corner.rate, 0.0);
  EXPECT_EQ(k.sense_corner.rate, std::max(0.0, k.sense_corner.raw_rate));
  EXPECT_LT(k.sense_corner.rate, k.comm_corner.rate);
}

}  // namespace
}  // namespace isac
