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

#include "isac/types.hpp"

namespace isac {

/// [Re(x); Im(x)] stacking of a complex k-vector.
struct RealizedVector {
  RVector v;
};

/// [[Re, -Im], [Im, Re]] embedding of a complex n x m matrix, so that
/// realize(A) * realize(x) == realize(A * x).
struct RealizedMatrix {
  RMatrix m;
};

inline RealizedVector complex_to_real_vec(const CVector& x) {
  const auto k = x.size();
  RealizedVector out{RVector(2 * k)};
  out.v.head(k) = x.real();
  out.v.tail(k) = x.imag();
  return out;
}

inline CVector real_to_complex_vec(const RealizedVector& r) {
  if (r.v.size() % 2 != 0) throw NumericalError("realized vector must have even length");
  const auto k = r.v.size() / 2;
  CVector x(k);
  x.real() = r.v.head(k);
  x.imag() = r.v.tail(k);
  return x;
}

inline RealizedMatrix complex_to_real_mat(const CMatrix& a) {
  const auto n = a.rows();
  const auto m = a.cols();
  RealizedMatrix out{RMatrix(2 * n, 2 * m)};
  out.m.topLeftCorner(n, m) = a.real();
  out.m.topRightCorner(n, m) = -a.imag();
  out.m.bottomLeftCorner(n, m) = a.imag();
  out.m.bottomRightCorner(n, m) = a.real();
  return out;
}

/// Realized vectorization of vec(A^T): the rows of A are stacked one after
/// another and each row is realized in place, i.e.
/// [Re a_1; Im a_1; Re a_2; Im a_2; ...] with a_n the n-th row of A.
/// With this ordering the sensing operator is block diagonal.
inline RVector realize_rows(const CMatrix& a) {
  const auto cols = a.cols();
  RVector out(2 * a.rows() * cols);
  for (Eigen::Index n = 0; n < a.rows(); ++n) {
    out.segment(2 * n * cols, 2 * cols) = complex_to_real_vec(a.row(n).transpose()).v;
  }
  return out;
}

/// Inverse of realize_rows for a matrix with `cols` columns.
inline CMatrix unrealize_rows(const RVector& v, Eigen::Index cols) {
  if (cols <= 0 || v.size() % (2 * cols) != 0) throw NumericalError("realized length does not match column count");
  const auto rows = v.size() / (2 * cols);
  CMatrix a(rows, cols);
  for (Eigen::Index n = 0; n < rows; ++n) {
    a.row(n) = real_to_complex_vec(RealizedVector{v.segment(2 * n * cols, 2 * cols)}).transpose();
  }
  return a;
}

/// Stacked sensing operator C_X = I_{N_s} (x) realize(X^T) of the vectorized
/// model realize_rows(Y) = C_X realize_rows(H) + realize_rows(Z).
class SensingOperator {
 public:
  SensingOperator(RMatrix block, int receivers) : block_(std::move(block)), receivers_(receivers) {}

  /// The repeated 2T x 2M diagonal block realize(X^T).
  const RMatrix& block() const noexcept { return block_; }
  int receivers() const noexcept { return receivers_; }
  Eigen::Index rows() const noexcept { return receivers_ * block_.rows(); }
  Eigen::Index cols() const noexcept { return receivers_ * block_.cols(); }

  RMatrix dense() const {
    RMatrix c = RMatrix::Zero(rows(), cols());
    for (int n = 0; n < receivers_; ++n) {
      c.block(n * block_.rows(), n * block_.cols(), block_.rows(), block_.cols()) = block_;
    }
    return c;
  }

  RVector apply(const RVector& h) const {
    if (h.size() != cols()) throw NumericalError("sensing operator applied to vector of wrong length");
    RVector y(rows());
    for (int n = 0; n < receivers_; ++n) {
      y.segment(n * block_.rows(), block_.rows()) = block_ * h.segment(n * block_.cols(), block_.cols());
    }
    return y;
  }

 private:
  RMatrix block_;
  int receivers_;
};

inline SensingOperator build_sensing_operator(const Waveform& x, int sense_rx) {
  if (sense_rx < 1) throw NumericalError("sensing operator needs at least one receive antenna");
  if (x.block().size() == 0) throw NumericalError("sensing operator needs a non-empty waveform");
  return SensingOperator(complex_to_real_mat(x.block().transpose()).m, sense_rx);
}

}  // namespace isac
