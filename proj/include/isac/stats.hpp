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
#include <cstdlib>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace isac {

/// Pairwise (cascade) summation. The association order depends only on the
/// length of the input, so sums are reproducible bit for bit.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanEstimate {
  double mean = 0.0;
  double stddev = 0.0;
  double sem = 0.0;  // standard error of the mean
  std::int64_t n = 0;
};

inline MeanEstimate estimate_mean(std::span<const double> v) {
  MeanEstimate e;
  e.n = static_cast<std::int64_t>(v.size());
  if (v.empty()) return e;
  e.mean = pairwise_sum(v) / static_cast<double>(v.size());
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [&](double x) { return (x - e.mean) * (x - e.mean); });
    e.stddev = std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1));
    e.sem = e.stddev / std::sqrt(static_cast<double>(v.size()));
  }
  return e;
}

/// Worker count for Monte Carlo loops: ISAC_THREADS when set to a positive
/// integer, the hardware concurrency otherwise.
inline unsigned worker_count() {
  if (const char* env = std::getenv("ISAC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) over contiguous chunks. If any call throws,
/// the exception from the lowest-indexed failing chunk is rethrown.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(worker_count(), n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t lo = n * w / workers;
    const std::int64_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::int64_t n, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  parallel_for(n, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(i); });
  return out;
}

}  // namespace isac
