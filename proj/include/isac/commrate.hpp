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
#include <functional>
#include <span>
#include <vector>

#include "isac/channels.hpp"
#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/stats.hpp"
#include "isac/types.hpp"
#include "isac/unitary_average.hpp"
#include "isac/waveforms.hpp"

namespace isac {

enum class RateMethod { logdet_mc, finite_t_lb, scalar_quadrature };

struct RateEstimate {
  double value = 0.0;  // clipped at zero
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  RateMethod method = RateMethod::logdet_mc;
  LogBase unit = LogBase::two;
  double raw_value = 0.0;         // before clipping
  double inner_bias_bound = 0.0;  // finite-T bound with Monte Carlo inner average only
};

/// Transmit covariance chosen from the (unblocked) channel realization.
using CovariancePolicy = std::function<CMatrix(const CMatrix&)>;
using ChannelSource = std::function<ChannelRealization(RngStream&)>;

inline ChannelSource default_comm_source(const SystemConfig& cfg) {
  return [cfg](RngStream& r) { return sample_channel(cfg, ChannelKind::communication, r); };
}

inline CovariancePolicy isotropic_policy(const SystemConfig& cfg) {
  return [p = cfg.power, m = cfg.tx_antennas](const CMatrix&) -> CMatrix {
    return p * CMatrix::Identity(m, m);
  };
}

inline CovariancePolicy water_filling_policy(const SystemConfig& cfg) {
  return [budget = cfg.total_power(), noise = cfg.noise_var_c](const CMatrix& h) -> CMatrix {
    return water_filling(h, budget, noise).covariance;
  };
}

/// log|I + H K H^H / noise_var| in nats.
inline double log_det_gain(const CMatrix& h, const CMatrix& k, double noise_var) {
  const auto n = h.rows();
  CMatrix g = CMatrix::Identity(n, n) + (h * k * h.adjoint()) / noise_var;
  g = (0.5 * (g + g.adjoint())).eval();
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("log-det argument is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

/// Per-draw log-det rates and transmit-covariance traces of one covariance
/// policy. Draw i uses stream rng.split(i). Blocked draws contribute zero
/// rate; the transmitter still radiates the isotropic covariance P0 I there.
struct PolicySamples {
  std::vector<double> rate_nats;
  std::vector<double> traces;
};

inline PolicySamples sample_policy(const SystemConfig& cfg, const CovariancePolicy& policy, const RngStream& rng,
                                   const ChannelSource& source) {
  struct Draw {
    double rate = 0.0;
    double trace = 0.0;
  };
  const auto draws = parallel_map<Draw>(cfg.mc_outer, [&](std::int64_t i) {
    RngStream r = rng.split(static_cast<std::uint64_t>(i));
    const auto ch = source(r);
    if (ch.blocked) return Draw{0.0, cfg.total_power()};
    const CMatrix k = policy(ch.matrix);
    require_psd(k, "covariance policy");
    return Draw{log_det_gain(ch.matrix, k, cfg.noise_var_c), k.diagonal().real().sum()};
  });
  PolicySamples out;
  out.rate_nats.reserve(draws.size());
  out.traces.reserve(draws.size());
  for (const auto& d : draws) {
    out.rate_nats.push_back(d.rate);
    out.traces.push_back(d.trace);
  }
  return out;
}

inline PolicySamples sample_policy(const SystemConfig& cfg, const CovariancePolicy& policy, const RngStream& rng) {
  return sample_policy(cfg, policy, rng, default_comm_source(cfg));
}

inline RateEstimate rate_from_nats(std::span<const double> nats, const SystemConfig& cfg, RateMethod method) {
  const auto est = estimate_mean(nats);
  RateEstimate r;
  r.raw_value = from_nats(est.mean, cfg.log_base);
  r.value = std::max(0.0, r.raw_value);
  r.std_error = from_nats(est.sem, cfg.log_base);
  r.n_samples = est.n;
  r.method = method;
  r.unit = cfg.log_base;
  return r;
}

/// Monte Carlo ergodic rate E[log|I + H K(H) H^H / sigma_c^2|] over
/// cfg.mc_outer communication-channel draws.
inline RateEstimate ergodic_rate_logdet(const SystemConfig& cfg, const CovariancePolicy& policy, const RngStream& rng,
                                        const ChannelSource& source) {
  const auto s = sample_policy(cfg, policy, rng, source);
  return rate_from_nats(s.rate_nats, cfg, RateMethod::logdet_mc);
}

inline RateEstimate ergodic_rate_logdet(const SystemConfig& cfg, const CovariancePolicy& policy, const RngStream& rng) {
  return ergodic_rate_logdet(cfg, policy, rng, default_comm_source(cfg));
}

/// Rate of the equal-singular-value unitary scheme as T grows without bound,
/// i.e. the ergodic log-det rate of the isotropic covariance P0 I.
inline RateEstimate rate_sense_opt_asymptotic(const SystemConfig& cfg, const RngStream& rng) {
  return ergodic_rate_logdet(cfg, isotropic_policy(cfg), rng);
}

/// Ergodic rate under per-block water-filling on the full budget M P0.
inline RateEstimate rate_comm_opt(const SystemConfig& cfg, const RngStream& rng) {
  return ergodic_rate_logdet(cfg, water_filling_policy(cfg), rng);
}

// ---------------------------------------------------------------------------
// Finite-T lower bound

/// Eigenvalues of Y Y^H (equivalently Y^H Y), the min(rows, cols) largest,
/// sorted descending and clipped at zero.
struct EigenSample {
  RVector lambdas;
};

inline EigenSample received_eigenvalues(const CMatrix& y) {
  const CMatrix gram = y.rows() <= y.cols() ? CMatrix(y * y.adjoint()) : CMatrix(y.adjoint() * y);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  RVector ev = es.eigenvalues().array().max(0.0);
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return {ev};
}

/// Noncoherent mutual information of the unitary scheme, normalised by T:
///
///   R >= alpha_c / T * E[ -N_c T - N_c M log(1 + rho) - log f(lambda) + sum_l lambda_l ]
///
/// with rho = sigma_Hc^2 P0 T / sigma_c^2, lambda the eigenvalues of Y Y^H
/// for the noise-normalised received block Y = (H X + Z) / sigma_c, and
///
///   f(lambda) = (1 + rho)^(-N_c M) E_U exp(rho/(1+rho) sum_n sum_{m<M} lambda_n |u_nm|^2).
///
/// The expectation runs over the law of the received eigenvalues (the
/// noise-only Wishart density times f), which is sampled by simulating the
/// channel. The unitary average is evaluated in closed form by default; with
/// InnerIntegral::monte_carlo it is averaged over cfg.mc_inner Haar draws.
inline RateEstimate finite_T_rate_lower_bound(const SystemConfig& cfg, const RngStream& rng) {
  validate_config(cfg);
  if (cfg.mc_inner < 100) throw ConfigError("mc_inner must be at least 100 for the finite-T bound");
  const int m = cfg.tx_antennas;
  const int t = cfg.coherence;
  const int nc = cfg.comm_rx;
  const double rho = cfg.chan_var_c * cfg.power * t / cfg.noise_var_c;
  const double c = rho / (1.0 + rho);
  const double inv_sigma = 1.0 / std::sqrt(cfg.noise_var_c);

  struct Draw {
    double value = 0.0;
    double bias = 0.0;
  };
  const auto draws = parallel_map<Draw>(cfg.mc_outer, [&](std::int64_t i) {
    RngStream r = rng.split(static_cast<std::uint64_t>(i));
    const CMatrix h = complex_gaussian_matrix(nc, m, cfg.chan_var_c, r);
    const Waveform x = sensing_optimal_waveform(cfg, r);
    const CMatrix z = sample_noise(nc, t, cfg.noise_var_c, r);
    const auto eig = received_eigenvalues(inv_sigma * (h * x.block() + z));
    const std::vector<double> a(eig.lambdas.data(), eig.lambdas.data() + eig.lambdas.size());
    std::vector<double> scaled(a.size());
    std::transform(a.begin(), a.end(), scaled.begin(), [&](double l) { return c * l; });

    Draw d;
    double log_avg = 0.0;
    if (cfg.inner_integral == InnerIntegral::closed_form) {
      log_avg = log_haar_exponential_average(scaled, m, t);
    } else {
      RngStream inner = r.split(1);
      const auto est = log_haar_exponential_average_mc(scaled, m, t, cfg.mc_inner, inner);
      log_avg = est.log_mean;
      d.bias = est.bias_bound;
    }
    // -N_c M log(1+rho) cancels against the prefactor of f.
    d.value = -static_cast<double>(nc) * t - log_avg + eig.lambdas.sum();
    return d;
  });

  std::vector<double> values(draws.size()), bias(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    values[i] = cfg.alpha_c * draws[i].value / t;
    bias[i] = cfg.alpha_c * draws[i].bias / t;
  }
  auto r = rate_from_nats(values, cfg, RateMethod::finite_t_lb);
  r.inner_bias_bound = from_nats(estimate_mean(bias).mean, cfg.log_base);
  return r;
}

}  // namespace isac
