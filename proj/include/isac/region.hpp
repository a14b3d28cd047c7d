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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "isac/commrate.hpp"
#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/sensing.hpp"
#include "isac/types.hpp"

namespace isac {

struct SweepSpec {
  std::vector<double> lambdas = {0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
  bool include_corners = true;
  // Evaluate every lambda on the caller's stream (paired draws). When false,
  // lambda j uses rng.split(kSweepStreamBase + j).
  bool common_random_numbers = true;
  int timeshare_points = 11;
};

inline constexpr std::uint64_t kSweepStreamBase = 1000;
inline constexpr std::uint64_t kFiniteTStream = 77;

inline void validate_sweep(const SweepSpec& spec) {
  if (spec.lambdas.empty() && !spec.include_corners) throw ConfigError("sweep needs lambdas or corners");
  for (std::size_t i = 0; i < spec.lambdas.size(); ++i) {
    const double l = spec.lambdas[i];
    if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("sweep lambdas must be finite and nonnegative");
    if (i > 0 && !(l > spec.lambdas[i - 1])) throw ConfigError("sweep lambdas must be strictly increasing");
  }
  if (spec.timeshare_points < 2) throw ConfigError("time-sharing segment needs at least 2 points");
}

namespace detail {

inline void check_eps_alpha(const SystemConfig& cfg, const TradeoffPoint& p) {
  if (cfg.eps_alpha && p.eps > *cfg.eps_alpha) {
    throw NumericalError("sensing constraint eps_alpha = " + std::to_string(*cfg.eps_alpha) +
                         " is infeasible (policy reaches eps = " + std::to_string(p.eps) + ")");
  }
}

// Isotropic covariance P0 I for every block, with the configured rate mode.
inline TradeoffPoint isotropic_point(const SystemConfig& cfg, const RngStream& rng) {
  const auto s = sample_policy(cfg, isotropic_policy(cfg), rng);
  const auto eps = poincare_bound(s.traces, cfg);
  const auto rate = cfg.rate_mode == RateMode::asymptotic
                        ? rate_from_nats(s.rate_nats, cfg, RateMethod::logdet_mc)
                        : finite_T_rate_lower_bound(cfg, rng.split(kFiniteTStream));
  TradeoffPoint p;
  p.lambda = 0.0;
  p.rate = rate.value;
  p.raw_rate = rate.raw_value;
  p.rate_stderr = rate.std_error;
  p.eps = eps.value;
  p.eps_stderr = eps.std_error;
  p.policy = Policy::sense_opt;
  return p;
}

// Per-block water-filling on the full budget M P0 (short-term constraint).
inline TradeoffPoint water_filled_point(const SystemConfig& cfg, const RngStream& rng) {
  const auto s = sample_policy(cfg, water_filling_policy(cfg), rng);
  const auto eps = poincare_bound(s.traces, cfg);
  const auto rate = rate_from_nats(s.rate_nats, cfg, RateMethod::logdet_mc);
  TradeoffPoint p;
  p.lambda = std::numeric_limits<double>::infinity();
  p.rate = rate.value;
  p.raw_rate = rate.raw_value;
  p.rate_stderr = rate.std_error;
  p.eps = eps.value;
  p.eps_stderr = eps.std_error;
  p.policy = Policy::comm_opt;
  return p;
}

}  // namespace detail

struct CornerPoints {
  TradeoffPoint sense_corner;
  TradeoffPoint comm_corner;
};

/// Sensing-optimal corner (deterministic trace M P0, isotropic rate) and
/// communication-optimal corner (water-filled rate, Poincare value of the
/// water-filled traces). Both corners see the same channel draws.
inline CornerPoints corner_points(const SystemConfig& cfg, const RngStream& rng) {
  validate_config(cfg);
  CornerPoints c{detail::isotropic_point(cfg, rng), detail::water_filled_point(cfg, rng)};
  detail::check_eps_alpha(cfg, c.sense_corner);
  return c;
}

/// Solves the lambda-weighted program for each lambda. With the trace of
/// E[R_x] pinned to M P0 and the Poincare value depending on R_x only through
/// its trace, the log-det objective is maximised by water-filling for every
/// lambda > 0; lambda = 0 keeps the sensing-optimal isotropic policy.
/// Points are returned sorted by rate.
inline std::vector<TradeoffPoint> pareto_sweep(const SystemConfig& cfg, const SweepSpec& spec, const RngStream& rng) {
  validate_config(cfg);
  validate_sweep(spec);
  std::vector<TradeoffPoint> out;
  for (std::size_t j = 0; j < spec.lambdas.size(); ++j) {
    const double lambda = spec.lambdas[j];
    const RngStream stream = spec.common_random_numbers ? rng : rng.split(kSweepStreamBase + j);
    try {
      TradeoffPoint p = lambda == 0.0 ? detail::isotropic_point(cfg, stream) : detail::water_filled_point(cfg, stream);
      detail::check_eps_alpha(cfg, p);
      p.lambda = lambda;
      p.policy = Policy::lambda_sweep;
      out.push_back(p);
    } catch (const NumericalError& e) {
      throw NumericalError("lambda = " + std::to_string(lambda) + ": " + e.what());
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rate < b.rate; });
  return out;
}

/// theta * sense + (1 - theta) * comm for theta = 0, 1/(n-1), ..., 1. The
/// lambda field of each point carries theta.
inline std::vector<TradeoffPoint> time_sharing_segment(const TradeoffPoint& sense, const TradeoffPoint& comm,
                                                       int n_points) {
  if (n_points < 2) throw ConfigError("time-sharing segment needs at least 2 points");
  std::vector<TradeoffPoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int j = 0; j < n_points; ++j) {
    const double th = static_cast<double>(j) / (n_points - 1);
    const double ot = 1.0 - th;
    TradeoffPoint p;
    p.lambda = th;
    p.rate = th * sense.rate + ot * comm.rate;
    p.raw_rate = th * sense.raw_rate + ot * comm.raw_rate;
    p.eps = th * sense.eps + ot * comm.eps;
    p.rate_stderr = std::hypot(th * sense.rate_stderr, ot * comm.rate_stderr);
    p.eps_stderr = std::hypot(th * sense.eps_stderr, ot * comm.eps_stderr);
    p.policy = Policy::time_share;
    out.push_back(p);
  }
  return out;
}

inline RegionResult assemble_region(const SystemConfig& cfg, const SweepSpec& spec, const RngStream& rng) {
  validate_sweep(spec);
  const auto corners = corner_points(cfg, rng);
  RegionResult r;
  r.sense_corner = corners.sense_corner;
  r.comm_corner = corners.comm_corner;
  r.sweep = pareto_sweep(cfg, spec, rng);
  r.timeshare = time_sharing_segment(r.sense_corner, r.comm_corner, spec.timeshare_points);
  r.converse = {r.sense_corner.eps, r.comm_corner.rate};
  return r;
}

/// Human-readable violations of the region invariants; empty when all hold.
inline std::vector<std::string> region_violations(const RegionResult& r) {
  std::vector<std::string> bad;
  for (const auto& p : r.sweep) {
    if (!(p.eps >= r.converse.eps_min - 3.0 * p.eps_stderr - 1e-15 * r.converse.eps_min)) {
      bad.push_back("sweep point lambda=" + std::to_string(p.lambda) + " below eps_min");
    }
    if (!(p.rate <= r.converse.rate_max + 3.0 * p.rate_stderr + 1e-12 * std::abs(r.converse.rate_max))) {
      bad.push_back("sweep point lambda=" + std::to_string(p.lambda) + " above R_max");
    }
    if (!(p.rate_stderr >= 0.0 && p.eps_stderr >= 0.0 && std::isfinite(p.rate_stderr) && std::isfinite(p.eps_stderr))) {
      bad.push_back("sweep point lambda=" + std::to_string(p.lambda) + " has invalid stderr");
    }
  }
  const auto& s = r.sense_corner;
  const auto& c = r.comm_corner;
  const double dr = c.rate - s.rate;
  const double de = c.eps - s.eps;
  const double norm = std::hypot(dr, de);
  for (const auto& p : r.timeshare) {
    // Distance of p from the line through both corners (zero when they coincide).
    const double dist = norm > 0.0 ? std::abs(dr * (p.eps - s.eps) - de * (p.rate - s.rate)) / norm
                                   : std::hypot(p.rate - s.rate, p.eps - s.eps);
    if (dist > 1e-9) bad.push_back("time-sharing point theta=" + std::to_string(p.lambda) + " off the segment");
  }
  return bad;
}

}  // namespace isac
