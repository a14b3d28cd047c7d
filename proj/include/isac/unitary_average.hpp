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

// Averages of exp(sum_n a_n sum_{m<M} |u_nm|^2) over a Haar unitary U.
//
// With A = diag(a_1..a_k, 0..0) and B = diag(1 (M times), 0 (T-M times)) the
// quantity is the Harish-Chandra-Itzykson-Zuber integral
//   E_U exp(tr(A U B U^H)) = prod_{p<T} p! det[exp(a_i b_j)] / (Delta(a) Delta(b))
// taken in its confluent limit, where repeated eigenvalues turn the
// corresponding rows and columns of the determinant into Taylor coefficients.
// The entries span hundreds of orders of magnitude at high SNR, so the
// determinant is evaluated in binary floating point with 100+ decimal digits
// and the precision is raised automatically when a self-check fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "isac/rng.hpp"
#include "isac/types.hpp"
#include "isac/waveforms.hpp"

namespace isac {

namespace detail {

struct SignedLog {
  int sign = 0;
  double log_abs = 0.0;
  // Decimal digits cancelled in the determinant: log10 of the product of
  // row maxima over |det|.
  double digits_lost = 0.0;
};

template <typename Real>
SignedLog confluent_hciz_log(const std::vector<double>& a, int m, int t) {
  using std::abs;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  const int k = static_cast<int>(a.size());
  const int poly = t - m;

  std::vector<std::vector<Real>> f(t, std::vector<Real>(t, Real(0)));
  std::vector<Real> inv_fact(t + 1);
  inv_fact[0] = 1;
  for (int i = 1; i <= t; ++i) inv_fact[i] = inv_fact[i - 1] / i;

  for (int i = 0; i < k; ++i) {
    const Real ai = a[i];
    const Real scale = exp(-ai);  // row i is divided by exp(a_i)
    Real pw = 1;
    for (int p = 0; p < std::max(m, poly); ++p) {
      if (p < m) f[i][p] = pw;
      if (p < poly) f[i][m + p] = pw * scale;
      pw *= ai;
    }
  }
  for (int r = 0; r < t - k; ++r) {
    for (int p = 0; p < m && p <= r; ++p) f[k + r][p] = inv_fact[r - p];
    if (r < poly) f[k + r][m + r] = 1;
  }

  Real log_row_scale = 0;
  for (const auto& row : f) {
    Real big = 0;
    for (const auto& x : row) big = std::max(big, Real(abs(x)));
    log_row_scale += log(big);
  }

  int sign = 1;
  Real log_det = 0;
  for (int c = 0; c < t; ++c) {
    int piv = c;
    for (int r = c + 1; r < t; ++r) {
      if (abs(f[r][c]) > abs(f[piv][c])) piv = r;
    }
    if (f[piv][c] == 0) return {0, 0.0};
    if (piv != c) {
      std::swap(f[piv], f[c]);
      sign = -sign;
    }
    if (f[c][c] < 0) sign = -sign;
    log_det += log(abs(f[c][c]));
    for (int r = c + 1; r < t; ++r) {
      if (f[r][c] == 0) continue;
      const Real factor = f[r][c] / f[c][c];
      for (int j = c; j < t; ++j) f[r][j] -= factor * f[c][j];
    }
  }

  // Denominator: Delta over the nonzero a's times the cross terms with the
  // zero cluster, prod_i (-a_i)^(T-k). Constant: prod_{p<T} p! divided by
  // the Taylor factorials of both clusters of B, with sign (-1)^(M(T-M)).
  double log_const = 0.0;
  for (int p = 1; p < t; ++p) log_const += std::lgamma(p + 1.0);
  for (int p = 0; p < m; ++p) log_const -= std::lgamma(p + 1.0);
  for (int q = 0; q < poly; ++q) log_const -= std::lgamma(q + 1.0);
  if ((m * poly) % 2 != 0) sign = -sign;

  double log_den = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double d = a[j] - a[i];
      if (d < 0) sign = -sign;
      log_den += std::log(std::abs(d));
    }
    log_den += (t - k) * std::log(a[i]);
  }
  if ((k * (t - k)) % 2 != 0) sign = -sign;

  const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
  return {sign, log_const + static_cast<double>(log_det) + sum_a - log_den,
          static_cast<double>((log_row_scale - log_det) / log(Real(10)))};
}

}  // namespace detail

/// log E_U exp(sum_{n<k} a_n sum_{m<M} |u_nm|^2) for a T x T Haar unitary U,
/// k = a.size() <= T, M <= T, all a_n >= 0. Exact up to floating point.
///
/// Entries below 1e-300 are treated as zero (they contribute nothing).
/// Coincident entries are separated by a relative 1e-10 before evaluation.
inline double log_haar_exponential_average(std::span<const double> a_in, int m, int t) {
  if (m < 1 || t < m) throw NumericalError("unitary average needs 1 <= M <= T");
  if (static_cast<int>(a_in.size()) > t) throw NumericalError("unitary average needs at most T exponents");
  std::vector<double> a;
  for (double x : a_in) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw NumericalError("unitary average needs finite nonnegative exponents");
    if (x > 1e-300) a.push_back(x);
  }
  if (a.empty()) return 0.0;
  std::sort(a.begin(), a.end(), std::greater<>());
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i - 1] - a[i] <= 1e-10 * a[i - 1]) a[i] = a[i - 1] * (1.0 - 1e-10);
  }

  const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
  // Jensen: E exp(Z) >= exp(E Z) with E|u_nm|^2 = 1/T; and Z <= sum a.
  const double lower = sum_a * m / t;
  const double slack = 1e-9 * std::max(1.0, sum_a);
  auto plausible = [&](const detail::SignedLog& r, int digits) {
    return r.sign > 0 && r.digits_lost < digits - 25 && std::isfinite(r.log_abs) && r.log_abs >= lower - slack && r.log_abs <= sum_a + slack;
  };

  using namespace boost::multiprecision;
  if (auto r = detail::confluent_hciz_log<cpp_bin_float_100>(a, m, t); plausible(r, 100)) return r.log_abs;
  if (auto r = detail::confluent_hciz_log<number<cpp_bin_float<300>>>(a, m, t); plausible(r, 300)) return r.log_abs;
  if (auto r = detail::confluent_hciz_log<number<cpp_bin_float<1000>>>(a, m, t); plausible(r, 1000)) return r.log_abs;
  throw NumericalError("unitary average lost precision (exponents too small or too close)");
}

struct UnitaryAverageEstimate {
  double log_mean = 0.0;
  // Second-order estimate of the downward bias of log(sample mean):
  // var(w) / (2 n mean(w)^2).
  double bias_bound = 0.0;
};

/// Monte Carlo counterpart of log_haar_exponential_average, averaging over
/// `draws` Haar unitaries in the log domain.
inline UnitaryAverageEstimate log_haar_exponential_average_mc(std::span<const double> a, int m, int t,
                                                              std::int64_t draws, RngStream& rng) {
  if (draws < 1) throw NumericalError("need at least one unitary draw");
  const auto k = static_cast<Eigen::Index>(a.size());
  std::vector<double> s(static_cast<std::size_t>(draws));
  for (std::int64_t j = 0; j < draws; ++j) {
    const auto u = sample_id_unitary(t, rng);
    double z = 0.0;
    for (Eigen::Index n = 0; n < k; ++n) z += a[n] * u.u.row(n).head(m).squaredNorm();
    s[static_cast<std::size_t>(j)] = z;
  }
  const double top = *std::max_element(s.begin(), s.end());
  double sum = 0.0, sum_sq = 0.0;
  for (double z : s) {
    const double w = std::exp(z - top);
    sum += w;
    sum_sq += w * w;
  }
  const auto n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = draws > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {top + std::log(mean), var / (2.0 * n * mean * mean)};
}

}  // namespace isac
