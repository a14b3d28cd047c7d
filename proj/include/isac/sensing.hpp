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

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "isac/channels.hpp"
#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/stats.hpp"
#include "isac/transforms.hpp"
#include "isac/types.hpp"
#include "isac/waveforms.hpp"

namespace isac {

enum class BoundKind { poincare, lmmse, lmmse_normalized, mmse_oracle };

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::poincare: return "poincare";
    case BoundKind::lmmse: return "lmmse";
    case BoundKind::lmmse_normalized: return "lmmse_normalized";
    case BoundKind::mmse_oracle: return "mmse_oracle";
  }
  return "unknown";
}

struct SensingBound {
  double value = 0.0;
  double std_error = 0.0;
  BoundKind kind = BoundKind::poincare;
  std::int64_t n_samples = 0;
};

/// High-SNR Poincare lower bound on the sensing MMSE,
///   alpha_s * sigma_s^2 / 2 * E[1 / tr(R_x)],
/// with the expectation replaced by the sample mean over `traces`.
inline SensingBound poincare_bound(std::span<const double> traces, const SystemConfig& cfg) {
  if (traces.empty()) throw NumericalError("poincare_bound needs at least one trace sample");
  std::vector<double> inv(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!(traces[i] > 0.0)) throw NumericalError("degenerate waveform: tr(R_x) must be positive");
    inv[i] = 1.0 / traces[i];
  }
  const auto est = estimate_mean(inv);
  const double scale = cfg.alpha_s * cfg.noise_var_s / 2.0;
  return {scale * est.mean, scale * est.sem, BoundKind::poincare, est.n};
}

/// Linear MMSE of H_s under the blockage-mixture prior (zero mean,
/// covariance alpha_s sigma_Hs^2 I):
///   N_s sigma_s^2 / T * E[tr((R_x + sigma_s^2 / (alpha_s T sigma_Hs^2) I)^-1)].
/// The MSE is the squared Frobenius error summed over all N_s M complex
/// entries with complex noise variance sigma_s^2 per observation.
inline SensingBound lmmse_bound(std::span<const CMatrix> rx_samples, const SystemConfig& cfg) {
  if (rx_samples.empty()) throw NumericalError("lmmse_bound needs at least one covariance sample");
  const double reg = cfg.noise_var_s / (cfg.alpha_s * cfg.coherence * cfg.chan_var_s);
  std::vector<double> tr_inv(rx_samples.size());
  for (std::size_t i = 0; i < rx_samples.size(); ++i) {
    const CMatrix& r = rx_samples[i];
    if (r.rows() != r.cols()) throw NumericalError("lmmse_bound: sample covariance is not square");
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw NumericalError("lmmse_bound: sample covariance is not hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
    tr_inv[i] = (1.0 / (es.eigenvalues().array() + reg)).sum();
  }
  const auto est = estimate_mean(tr_inv);
  const double scale = cfg.sense_rx * cfg.noise_var_s / cfg.coherence;
  return {scale * est.mean, scale * est.sem, BoundKind::lmmse, est.n};
}

/// Per-entry LMMSE: the lmmse value divided by M N_s.
inline SensingBound lmmse_normalized(const SensingBound& b, const SystemConfig& cfg) {
  if (b.kind != BoundKind::lmmse) throw NumericalError("lmmse_normalized expects an lmmse bound");
  const double d = static_cast<double>(cfg.tx_antennas) * cfg.sense_rx;
  return {b.value / d, b.std_error / d, BoundKind::lmmse_normalized, b.n_samples};
}

using WaveformPolicy = std::function<Waveform(RngStream&)>;

inline WaveformPolicy sensing_optimal_policy(const SystemConfig& cfg) {
  return [cfg](RngStream& r) { return sensing_optimal_waveform(cfg, r); };
}

inline WaveformPolicy water_filled_policy(const SystemConfig& cfg) {
  return [cfg](RngStream& r) { return water_filled_waveform(cfg, r); };
}

/// Squared error of the exact conditional-mean estimate of H_s for one
/// observation Y = H X + Z under the two-component blockage prior.
///
/// All algebra runs in realized coordinates: each receive row contributes a
/// 2T-vector y_n = B h_n + z_n with B = realize(X^T), prior covariance
/// sigma_Hs^2/2 I and noise covariance sigma_s^2/2 I. The conditional mean is
///   w(Y) * sigma_Hs^2/2 * B^T S^-1 y_n,   S = sigma_Hs^2/2 B B^T + sigma_s^2/2 I,
/// with posterior probability w(Y) of the unblocked component evaluated in
/// the log domain.
inline double conditional_mean_error(const SystemConfig& cfg, const Waveform& x, const CMatrix& h, const CMatrix& y) {
  const auto op = build_sensing_operator(x, cfg.sense_rx);
  const RMatrix& b = op.block();
  const auto dim = b.rows();  // 2T
  const double prior = cfg.chan_var_s / 2.0;
  const double noise = cfg.noise_var_s / 2.0;

  RMatrix s = prior * (b * b.transpose());
  s.diagonal().array() += noise;
  const Eigen::LLT<RMatrix> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("observation covariance is not positive definite");
  const double log_det_s = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();

  const RVector yr = realize_rows(y);
  const RVector hr = realize_rows(h);
  const auto rows = static_cast<Eigen::Index>(cfg.sense_rx);

  double quad1 = 0.0;
  double quad0 = 0.0;
  RMatrix solved(dim, rows);
  for (Eigen::Index n = 0; n < rows; ++n) {
    const RVector yn = yr.segment(n * dim, dim);
    solved.col(n) = llt.solve(yn);
    quad1 += yn.dot(solved.col(n));
    quad0 += yn.squaredNorm() / noise;
  }
  // Log densities up to the common -N_s T log(2 pi) term.
  const double log_g1 = -0.5 * quad1 - 0.5 * rows * log_det_s;
  const double log_g0 = -0.5 * quad0 - 0.5 * rows * dim * std::log(noise);
  double weight = 1.0;
  if (cfg.alpha_s < 1.0) {
    const double l1 = std::log(cfg.alpha_s) + log_g1;
    const double l0 = std::log1p(-cfg.alpha_s) + log_g0;
    weight = 1.0 / (1.0 + std::exp(l0 - l1));
  }

  const auto cols = b.cols();  // 2M
  double err = 0.0;
  for (Eigen::Index n = 0; n < rows; ++n) {
    const RVector est = weight * prior * (b.transpose() * solved.col(n));
    err += (hr.segment(n * cols, cols) - est).squaredNorm();
  }
  return err;
}

/// Monte Carlo estimate of the exact MMSE of H_s for the given waveform
/// policy. Draw i uses stream rng.split(i) for waveform, channel and noise,
/// in that order.
inline SensingBound mmse_oracle(const SystemConfig& cfg, const WaveformPolicy& policy, const RngStream& rng) {
  const int dim = 2 * cfg.sense_rx * cfg.tx_antennas;
  if (dim > cfg.oracle_cap) {
    throw OracleScaleError("oracle scale exceeded: 2*N_s*M = " + std::to_string(dim) + " > cap " +
                           std::to_string(cfg.oracle_cap));
  }
  const auto errors = parallel_map<double>(cfg.mc_outer, [&](std::int64_t i) {
    RngStream r = rng.split(static_cast<std::uint64_t>(i));
    const Waveform x = policy(r);
    const auto ch = sample_channel(cfg, ChannelKind::sensing, r);
    const CMatrix z = sample_noise(cfg.sense_rx, x.length(), cfg.noise_var_s, r);
    const CMatrix y = ch.matrix * x.block() + z;
    return conditional_mean_error(cfg, x, ch.matrix, y);
  });
  const auto est = estimate_mean(errors);
  return {est.mean, est.sem, BoundKind::mmse_oracle, est.n};
}

}  // namespace isac
