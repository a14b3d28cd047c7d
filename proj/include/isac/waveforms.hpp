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

#include "isac/channels.hpp"
#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/types.hpp"

namespace isac {

/// Haar-distributed (isotropically distributed) T x T unitary matrix.
struct IsotropicUnitary {
  CMatrix u;
};

/// QR of a T x T matrix of i.i.d. CN(0,1) entries. The phases of the
/// triangular factor's diagonal are moved into the unitary factor so that R
/// has a positive real diagonal; without that correction the unitary factor
/// is not Haar.
inline IsotropicUnitary sample_id_unitary(int t, RngStream& rng) {
  if (t < 1) throw NumericalError("unitary dimension must be positive");
  const CMatrix a = complex_gaussian_matrix(t, t, 1.0, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  const auto diag = qr.matrixQR().diagonal();
  for (int j = 0; j < t; ++j) {
    const double mag = std::abs(diag(j));
    if (mag > 0.0) q.col(j) *= diag(j) / mag;
  }
  return {std::move(q)};
}

/// Equal-singular-value block X = sqrt(T) U Sigma V^H with U (M x M) and
/// V (T x T) independent Haar unitaries and Sigma = sqrt(P0) [I_M 0]. Every
/// draw has R_x = P0 I_M, hence tr(R_x) = M P0 deterministically.
inline Waveform sensing_optimal_waveform(const SystemConfig& cfg, RngStream& rng) {
  const int m = cfg.tx_antennas;
  const int t = cfg.coherence;
  if (t < m) throw ConfigError("T < M: sensing-optimal waveform needs coherence >= tx_antennas");
  const auto u = sample_id_unitary(m, rng);
  const auto v = sample_id_unitary(t, rng);
  CMatrix x = std::sqrt(static_cast<double>(t) * cfg.power) * (u.u * v.u.adjoint().topRows(m));
  return Waveform::from_block(std::move(x));
}

/// Sum-power water-filling over the eigenmodes of H^H H.
struct WaterFillingResult {
  RVector levels;  // Lambda_ii, one per transmit dimension (zeros past the rank)
  double mu = 0.0;
  CMatrix covariance;  // V diag(Lambda) V^H
  RVector gains;       // eta_i^2 of the active modes, descending
};

/// Singular values below this fraction of the largest are zero modes.
inline constexpr double kRankTolerance = 1e-12;

inline WaterFillingResult water_filling(const CMatrix& h, double budget, double noise_var) {
  if (!(budget > 0.0)) throw NumericalError("water-filling budget must be positive");
  if (!(noise_var > 0.0)) throw NumericalError("water-filling noise variance must be positive");
  const auto m = h.cols();
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) throw NumericalError("no active mode: channel matrix is zero");

  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTolerance * sv(0)) ++rank;

  WaterFillingResult wf;
  wf.gains = sv.head(rank).array().square();
  const RVector floor = noise_var / wf.gains.array();

  auto poured = [&](double mu) { return (mu - floor.array()).max(0.0).sum(); };
  double lo = floor.minCoeff();
  double hi = floor.maxCoeff() + budget;
  for (int it = 0; it < 400 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (poured(mid) < budget ? lo : hi) = mid;
  }
  wf.mu = 0.5 * (lo + hi);

  wf.levels = RVector::Zero(m);
  wf.levels.head(rank) = (wf.mu - floor.array()).max(0.0);
  const CMatrix& v = svd.matrixV();
  wf.covariance = v * wf.levels.cast<Complex>().asDiagonal() * v.adjoint();
  wf.covariance = (0.5 * (wf.covariance + wf.covariance.adjoint())).eval();
  return wf;
}

namespace detail {

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// Throws unless K is hermitian positive semidefinite up to a relative
/// tolerance of 1e-10.
inline void require_psd(const CMatrix& k, const char* what) {
  if (k.rows() != k.cols()) throw NumericalError(std::string(what) + ": covariance is not square");
  const double scale = std::max(1.0, detail::max_abs(k));
  if (detail::max_abs(k - k.adjoint()) > 1e-10 * scale) {
    throw NumericalError(std::string(what) + ": covariance is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw NumericalError(std::string(what) + ": covariance is indefinite");
  }
}

/// Block whose columns are i.i.d. CN(0, K).
inline Waveform gaussian_waveform(const CMatrix& k, int t, RngStream& rng) {
  require_psd(k, "gaussian_waveform");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (k + k.adjoint()));
  const RVector root = es.eigenvalues().array().max(0.0).sqrt();
  const CMatrix factor = es.eigenvectors() * root.cast<Complex>().asDiagonal();
  const CMatrix w = complex_gaussian_matrix(k.rows(), t, 1.0, rng);
  return Waveform::from_block(factor * w);
}

/// Communication-optimal block: water-filling on a fresh communication
/// channel draw (isotropic P0 I when that draw is blocked), then i.i.d.
/// CN(0, K_wf) columns.
inline Waveform water_filled_waveform(const SystemConfig& cfg, RngStream& rng) {
  const auto ch = sample_channel(cfg, ChannelKind::communication, rng);
  const CMatrix k = ch.blocked ? CMatrix(cfg.power * CMatrix::Identity(cfg.tx_antennas, cfg.tx_antennas))
                               : water_filling(ch.matrix, cfg.total_power(), cfg.noise_var_c).covariance;
  return gaussian_waveform(k, cfg.coherence, rng);
}

}  // namespace isac
