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

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace isac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Error hierarchy. The CLI maps each class onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class OracleScaleError : public Error {
 public:
  using Error::Error;
};

enum class ChannelKind { sensing, communication };

enum class Policy { sense_opt, comm_opt, lambda_sweep, time_share };

inline std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::sense_opt: return "sense_opt";
    case Policy::comm_opt: return "comm_opt";
    case Policy::lambda_sweep: return "lambda_sweep";
    case Policy::time_share: return "time_share";
  }
  return "unknown";
}

inline std::string_view to_string(ChannelKind k) {
  return k == ChannelKind::sensing ? "sensing" : "communication";
}

/// One coherence-block draw of a channel matrix. A blocked draw is the
/// all-zero matrix.
struct ChannelRealization {
  CMatrix matrix;
  bool blocked = false;
  ChannelKind kind = ChannelKind::communication;
};

/// A transmit block X (M x T) together with its sample covariance
/// R_x = X X^H / T and the real trace of R_x.
class Waveform {
 public:
  Waveform() = default;

  static Waveform from_block(CMatrix x) {
    Waveform w;
    const auto t = static_cast<double>(x.cols());
    w.rx_ = (x * x.adjoint()) / t;
    // Exact hermitian symmetrisation; the product above is hermitian only up
    // to rounding in the off-diagonal entries.
    w.rx_ = (0.5 * (w.rx_ + w.rx_.adjoint())).eval();
    w.trace_ = w.rx_.diagonal().real().sum();
    w.x_ = std::move(x);
    return w;
  }

  const CMatrix& block() const noexcept { return x_; }
  const CMatrix& sample_covariance() const noexcept { return rx_; }
  double trace() const noexcept { return trace_; }
  Eigen::Index antennas() const noexcept { return x_.rows(); }
  Eigen::Index length() const noexcept { return x_.cols(); }

 private:
  CMatrix x_;
  CMatrix rx_;
  double trace_ = 0.0;
};

/// One (eps, R) operating point.
struct TradeoffPoint {
  double lambda = 0.0;
  double rate = 0.0;
  double eps = 0.0;
  double rate_stderr = 0.0;
  double eps_stderr = 0.0;
  Policy policy = Policy::lambda_sweep;
  // Pre-clip rate, kept when a Monte Carlo estimate came out negative.
  double raw_rate = 0.0;
};

struct Converse {
  double eps_min = 0.0;
  double rate_max = 0.0;
};

struct RegionResult {
  TradeoffPoint sense_corner;
  TradeoffPoint comm_corner;
  std::vector<TradeoffPoint> sweep;
  std::vector<TradeoffPoint> timeshare;
  Converse converse;
};

}  // namespace isac
