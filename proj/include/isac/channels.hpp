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

#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/types.hpp"

namespace isac {

/// rows x cols matrix with i.i.d. CN(0, var) entries.
inline CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double var, RngStream& rng) {
  CMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.complex_normal(var);
  }
  return a;
}

inline CMatrix sample_noise(Eigen::Index rows, Eigen::Index cols, double var, RngStream& rng) {
  if (!(var > 0.0)) throw NumericalError("noise variance must be positive");
  return complex_gaussian_matrix(rows, cols, var, rng);
}

/// One coherence block of Rayleigh fading with blockage: the zero matrix with
/// probability 1 - alpha, i.i.d. CN(0, sigma_H^2) entries otherwise. One
/// uniform is consumed for the blockage decision before any Gaussian draw.
inline ChannelRealization sample_channel(const SystemConfig& cfg, ChannelKind kind, RngStream& rng) {
  const bool sensing = kind == ChannelKind::sensing;
  const Eigen::Index rows = sensing ? cfg.sense_rx : cfg.comm_rx;
  const double alpha = sensing ? cfg.alpha_s : cfg.alpha_c;
  const double var = sensing ? cfg.chan_var_s : cfg.chan_var_c;

  ChannelRealization ch;
  ch.kind = kind;
  ch.blocked = rng.uniform() >= alpha;
  if (ch.blocked) {
    ch.matrix = CMatrix::Zero(rows, cfg.tx_antennas);
  } else {
    ch.matrix = complex_gaussian_matrix(rows, cfg.tx_antennas, var, rng);
  }
  return ch;
}

}  // namespace isac
