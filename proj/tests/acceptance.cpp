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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "isac/isac.hpp"

namespace {

using namespace isac;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome bound_ordering() {
  const auto t0 = Clock::now();
  SystemConfig c;
  c.mc_outer = 10000;
  const RngStream rng = RngStream(c.seed).split(cli::kBoundsStream);
  const auto b = cli::evaluate_bounds(c, Policy::sense_opt, rng);
  const double secs = seconds_since(t0);
  return {cli::ordering_holds(b) && secs < 120.0,
          "poincare " + fmt(b.poincare.value) + " <= oracle " + fmt(b.oracle.value) + " +- " +
              fmt(b.oracle.std_error) + " <= lmmse " + fmt(b.lmmse.value) + ", " + fmt(secs) + " s"};
}

Outcome poincare_corner() {
  const SystemConfig c;
  const auto k = corner_points([] {
    SystemConfig s;
    s.mc_outer = 1000;
    return s;
  }(), RngStream(c.seed));
  const double expected = c.alpha_s * c.noise_var_s / (2.0 * c.tx_antennas * c.power);
  const double rel = std::abs(k.sense_corner.eps / expected - 1.0);
  return {rel <= 1e-10 && std::abs(expected - 1.9905e-4) < 1e-8,
          "eps_min " + fmt(k.sense_corner.eps) + ", relative error " + fmt(rel)};
}

Outcome water_filling_oracle() {
  SystemConfig c;
  c.alpha_c = 1.0;
  RngStream rng(c.seed);
  double worst_sum = 0.0, worst_level = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CMatrix h = sample_channel(c, ChannelKind::communication, rng).matrix;
    const double noise = i % 2 ? c.noise_var_c : 1.5;
    const auto wf = water_filling(h, c.total_power(), noise);
    worst_sum = std::max(worst_sum, std::abs(wf.levels.sum() - c.total_power()));
    Eigen::JacobiSVD<CMatrix> svd(h);
    std::vector<double> g;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) g.push_back(std::pow(svd.singularValues()(k), 2));
    // Sort-and-solve: largest active set whose weakest level stays nonnegative.
    for (std::size_t k = g.size(); k >= 1; --k) {
      double floors = 0.0;
      for (std::size_t j = 0; j < k; ++j) floors += noise / g[j];
      const double mu = (c.total_power() + floors) / static_cast<double>(k);
      if (mu >= noise / g[k - 1]) {
        for (std::size_t j = 0; j < g.size(); ++j) {
          const double want = j < k ? mu - noise / g[j] : 0.0;
          worst_level = std::max(worst_level, std::abs(wf.levels(static_cast<Eigen::Index>(j)) - want));
        }
        break;
      }
    }
  }
  return {worst_sum <= 1e-9 && worst_level <= 1e-9,
          "max budget error " + fmt(worst_sum) + ", max level error " + fmt(worst_level)};
}

Outcome gaussian_equality() {
  SystemConfig c;
  c.alpha_s = 1.0;
  c.mc_outer = 10000;
  const RngStream rng = RngStream(c.seed).split(cli::kBoundsStream);
  const auto b = cli::evaluate_bounds(c, Policy::sense_opt, rng);
  const double se = std::hypot(b.lmmse.std_error, b.oracle.std_error);
  return {std::abs(b.oracle.value - b.lmmse.value) <= 3.0 * se,
          "oracle " + fmt(b.oracle.value) + ", lmmse " + fmt(b.lmmse.value) + ", 3 se " + fmt(3.0 * se)};
}

Outcome scalar_quadrature() {
  SystemConfig c;
  c.tx_antennas = c.comm_rx = c.sense_rx = c.coherence = 1;
  c.alpha_c = 1.0;
  c.mc_outer = 100000;
  const auto r = ergodic_rate_logdet(c, isotropic_policy(c), RngStream(c.seed));
  boost::math::quadrature::exp_sinh<double> integrator;
  const double s = c.power * c.chan_var_c / c.noise_var_c;
  const double oracle =
      from_nats(integrator.integrate([&](double g) { return std::exp(-g) * std::log1p(s * g); }), c.log_base);
  return {std::abs(r.value - oracle) <= 3.0 * r.std_error,
          "MC " + fmt(r.value) + " +- " + fmt(r.std_error) + ", quadrature " + fmt(oracle)};
}

Outcome region_shape() {
  const SystemConfig c;
  const auto r = assemble_region(c, SweepSpec{}, RngStream(c.seed));
  double worst = 0.0;
  bool ok = true;
  for (const auto& p : r.sweep) {
    const double d = std::abs(p.eps - r.converse.eps_min);
    worst = std::max(worst, d);
    ok = ok && d <= 3.0 * p.eps_stderr + 1e-15 * r.converse.eps_min;
  }
  const double gap = r.comm_corner.rate - r.sense_corner.rate;
  const double se = std::hypot(r.comm_corner.rate_stderr, r.sense_corner.rate_stderr);
  ok = ok && std::abs(gap) <= 3.0 * se;
  return {ok, "max |eps - eps_min| " + fmt(worst) + ", corner rate gap " + fmt(gap) + " vs 3 se " + fmt(3.0 * se)};
}

Outcome finite_t_sanity() {
  const auto t0 = Clock::now();
  SystemConfig c;
  c.mc_outer = 2000;
  c.mc_inner = 500;
  const RngStream rng(c.seed);
  const auto fin = finite_T_rate_lower_bound(c, rng);
  const auto asy = rate_sense_opt_asymptotic(c, rng);
  const double secs = seconds_since(t0);
  const bool ok = fin.value <= asy.value + 3.0 * std::hypot(fin.std_error, asy.std_error) && fin.value >= 0.0 &&
                  secs < 600.0;
  return {ok, "finite-T " + fmt(fin.value) + " +- " + fmt(fin.std_error) + " <= asymptotic " + fmt(asy.value) + ", " +
                  fmt(secs) + " s"};
}

Outcome jensen() {
  SystemConfig c;
  c.mc_outer = 500;
  bool ok = true;
  double min_gap = 1e300;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const auto s = cli::detail::sample_waveforms(c, water_filled_policy(c), RngStream(c.seed).split(run));
    std::vector<double> inv;
    for (double t : s.traces) inv.push_back(1.0 / t);
    const double gap = estimate_mean(inv).mean - 1.0 / estimate_mean(s.traces).mean;
    min_gap = std::min(min_gap, gap);
    ok = ok && gap >= 0.0;
  }
  return {ok, "smallest gap over 20 runs " + fmt(min_gap)};
}

Outcome haar() {
  const int t = 16, n = 10000;
  RngStream rng(9);
  RngStream qrng(10);
  const CMatrix q = sample_id_unitary(t, qrng).u;
  double worst = 0.0;
  std::vector<std::vector<double>> a(3), b(3);
  for (int i = 0; i < n; ++i) {
    const CMatrix u = sample_id_unitary(t, rng).u;
    worst = std::max(worst, (u.adjoint() * u - CMatrix::Identity(t, t)).cwiseAbs().maxCoeff());
    const CMatrix v = q * u;
    a[0].push_back(u(0, 0).real());
    a[1].push_back(std::norm(u(0, 0)));
    a[2].push_back(std::norm(u(0, 0)) * std::norm(u(0, 0)));
    b[0].push_back(v(0, 0).real());
    b[1].push_back(std::norm(v(0, 0)));
    b[2].push_back(std::norm(v(0, 0)) * std::norm(v(0, 0)));
  }
  bool ok = worst <= 1e-10;
  for (int k = 0; k < 3; ++k) {
    const auto x = estimate_mean(a[k]);
    const auto y = estimate_mean(b[k]);
    ok = ok && std::abs(x.mean - y.mean) <= 3.0 * std::hypot(x.sem, y.sem);
  }
  return {ok, "max |U^H U - I| " + fmt(worst)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "isac_acceptance_determinism";
  fs::remove_all(dir);
  std::vector<std::string> digests;
  for (const char* threads : {"1", "3"}) {
    setenv("ISAC_THREADS", threads, 1);
    cli::RunOptions o;
    o.out_dir = dir / threads;
    std::ostringstream out, err;
    if (cli::run_region(o, out, err) != 0) return {false, "region run failed: " + err.str()};
    std::ifstream in(o.out_dir / "region.csv", std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    digests.push_back(io::sha256_hex(s.str()));
  }
  unsetenv("ISAC_THREADS");
  fs::remove_all(dir);
  return {digests[0] == digests[1], "sha256 " + digests[0].substr(0, 16) + " / " + digests[1].substr(0, 16)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bound ordering", bound_ordering},         {"Poincare corner value", poincare_corner},
      {"water-filling", water_filling_oracle},    {"Gaussian-case oracle equality", gaussian_equality},
      {"scalar-rate quadrature", scalar_quadrature}, {"region shape", region_shape},
      {"finite-T sanity", finite_t_sanity},       {"Jensen property", jensen},
      {"unitarity and Haar invariance", haar},    {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
