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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isac/commrate.hpp"
#include "isac/config.hpp"
#include "isac/io.hpp"
#include "isac/region.hpp"
#include "isac/sensing.hpp"
#include "isac/waveforms.hpp"

#ifndef ISAC_VERSION
#define ISAC_VERSION "unknown"
#endif

namespace isac::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kOracleScale = 4,
};

struct RunOptions {
  std::optional<std::string> config_path;  // reference defaults when empty
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> lambdas;
  std::optional<RateMode> rate_mode;
  std::optional<LogBase> log_base;
  // Test hook for run_validate: evaluates the LMMSE with sigma_s^2 scaled by
  // this factor while every other quantity keeps the configured value.
  std::optional<double> fault_noise_scale;
};

inline std::vector<double> parse_lambda_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto next = csv.find(',', pos);
    const auto tok = csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad lambda list entry '" + tok + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline SystemConfig resolve_config(const RunOptions& opt) {
  SystemConfig cfg = opt.config_path ? load_config(*opt.config_path) : SystemConfig{};
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.rate_mode) cfg.rate_mode = *opt.rate_mode;
  if (opt.log_base) cfg.log_base = *opt.log_base;
  validate_config(cfg);
  return cfg;
}

namespace detail {

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline nlohmann::json manifest(const std::string& command, const SystemConfig& cfg, double wall_seconds) {
  nlohmann::json m;
  m["version"] = ISAC_VERSION;
  m["command"] = command;
  m["config"] = to_json(cfg);
  m["seed"] = cfg.seed;
  m["wall_time_s"] = wall_seconds;
  m["threads"] = worker_count();
  return m;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OracleScaleError& e) {
    err << "oracle error: " << e.what() << '\n';
    return kOracleScale;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

struct WaveformSamples {
  std::vector<double> traces;
  std::vector<CMatrix> covariances;
};

// Draw i comes from rng.split(i) with the waveform drawn first, matching the
// draws mmse_oracle makes on the same stream.
inline WaveformSamples sample_waveforms(const SystemConfig& cfg, const WaveformPolicy& policy, const RngStream& rng) {
  const auto ws = parallel_map<Waveform>(cfg.mc_outer, [&](std::int64_t i) {
    RngStream r = rng.split(static_cast<std::uint64_t>(i));
    return policy(r);
  });
  WaveformSamples out;
  for (const auto& w : ws) {
    out.traces.push_back(w.trace());
    out.covariances.push_back(w.sample_covariance());
  }
  return out;
}

inline bool within(double a, double b, double se) { return std::abs(a - b) <= 3.0 * se; }

}  // namespace detail

inline constexpr std::uint64_t kBoundsStream = 500;

struct PolicyBounds {
  Policy policy;
  SensingBound poincare, lmmse, lmmse_norm, oracle;
};

/// Poincare, LMMSE, normalised LMMSE and oracle MMSE for one waveform
/// policy, all evaluated on the same waveform draws.
inline PolicyBounds evaluate_bounds(const SystemConfig& cfg, Policy policy, const RngStream& rng,
                                    double lmmse_noise_scale = 1.0) {
  const WaveformPolicy wp = policy == Policy::sense_opt ? sensing_optimal_policy(cfg) : water_filled_policy(cfg);
  const auto samples = detail::sample_waveforms(cfg, wp, rng);
  PolicyBounds b{policy, {}, {}, {}, {}};
  b.poincare = poincare_bound(samples.traces, cfg);
  SystemConfig lcfg = cfg;
  lcfg.noise_var_s *= lmmse_noise_scale;
  b.lmmse = lmmse_bound(samples.covariances, lcfg);
  b.lmmse_norm = lmmse_normalized(b.lmmse, cfg);
  b.oracle = mmse_oracle(cfg, wp, rng);
  return b;
}

inline bool ordering_holds(const PolicyBounds& b) {
  const double lo_se = std::hypot(b.poincare.std_error, b.oracle.std_error);
  const double hi_se = std::hypot(b.oracle.std_error, b.lmmse.std_error);
  return b.poincare.value <= b.oracle.value + 3.0 * lo_se && b.oracle.value <= b.lmmse.value + 3.0 * hi_se;
}

/// Writes region.csv, corners.json and manifest.json into opt.out_dir.
inline int run_region(const RunOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig cfg = resolve_config(opt);
    SweepSpec spec;
    if (opt.lambdas) spec.lambdas = *opt.lambdas;
    validate_sweep(spec);
    detail::ensure_dir(opt.out_dir);

    const RngStream rng(cfg.seed);
    const auto region = assemble_region(cfg, spec, rng);
    const auto bad = region_violations(region);
    for (const auto& b : bad) err << "warning: " << b << '\n';

    const std::string csv = io::region_csv(region, spec.include_corners);
    const std::string corners = io::corners_json(region, cfg).dump(2) + '\n';
    io::write_atomic(opt.out_dir / "region.csv", csv);
    io::write_atomic(opt.out_dir / "corners.json", corners);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto m = detail::manifest("region", cfg, wall);
    m["rate_unit"] = std::string(rate_unit(cfg.log_base));
    m["lambdas"] = spec.lambdas;
    m["sample_counts"] = {{"channel_draws_per_point", cfg.mc_outer},
                          {"points", spec.lambdas.size() + 2},
                          {"finite_T_inner_draws", cfg.rate_mode == RateMode::finite_t &&
                                                           cfg.inner_integral == InnerIntegral::monte_carlo
                                                       ? cfg.mc_inner
                                                       : 0}};
    m["outputs"] = {{"region.csv", io::sha256_hex(csv)}, {"corners.json", io::sha256_hex(corners)}};
    m["region_invariants"] = bad.empty() ? "PASS" : "FAIL";
    io::write_atomic(opt.out_dir / "manifest.json", m.dump(2) + '\n');

    out << "wrote " << (opt.out_dir / "region.csv").string() << " (" << region.sweep.size() << " sweep points)\n";
    return static_cast<int>(kOk);
  });
}

/// Writes bounds.csv and manifest.json: four bound kinds for each corner
/// waveform policy.
inline int run_bounds(const RunOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig cfg = resolve_config(opt);
    detail::ensure_dir(opt.out_dir);
    const RngStream rng = RngStream(cfg.seed).split(kBoundsStream);

    std::vector<io::BoundsRow> rows;
    nlohmann::json checks;
    for (const Policy p : {Policy::sense_opt, Policy::comm_opt}) {
      const auto b = evaluate_bounds(cfg, p, rng);
      for (const auto& s : {b.poincare, b.lmmse, b.lmmse_norm, b.oracle}) rows.push_back({p, s});
      const std::string name(to_string(p));
      checks[name + ".ordering"] = ordering_holds(b) ? "PASS" : "FAIL";
      if (cfg.alpha_s == 1.0) {
        const double se = std::hypot(b.lmmse.std_error, b.oracle.std_error);
        checks[name + ".gaussian_equality"] = detail::within(b.lmmse.value, b.oracle.value, se) ? "PASS" : "FAIL";
      }
    }
    const std::string csv = io::bounds_csv(rows);
    io::write_atomic(opt.out_dir / "bounds.csv", csv);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto m = detail::manifest("bounds", cfg, wall);
    m["sample_counts"] = {{"waveform_draws_per_policy", cfg.mc_outer}};
    m["outputs"] = {{"bounds.csv", io::sha256_hex(csv)}};
    m["checks"] = checks;
    io::write_atomic(opt.out_dir / "manifest.json", m.dump(2) + '\n');
    out << "wrote " << (opt.out_dir / "bounds.csv").string() << " (" << rows.size() << " rows)\n";
    return static_cast<int>(kOk);
  });
}

/// Runs the invariant suite and prints one PASS/FAIL line per check.
/// Returns 0 iff every check passes.
inline int run_validate(const RunOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const SystemConfig cfg = resolve_config(opt);
    const RngStream root(cfg.seed);
    bool all = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = {}) {
      out << (ok ? "PASS " : "FAIL ") << name;
      if (!detail.empty()) out << "  (" << detail << ')';
      out << '\n';
      all = all && ok;
    };
    const auto draws = std::min<std::int64_t>(cfg.mc_outer, 1000);

    {
      double worst = 0.0;
      for (std::int64_t i = 0; i < draws; ++i) {
        RngStream r = root.split(1).split(static_cast<std::uint64_t>(i));
        const auto u = sample_id_unitary(cfg.coherence, r);
        const CMatrix e = u.u.adjoint() * u.u - CMatrix::Identity(cfg.coherence, cfg.coherence);
        worst = std::max(worst, e.cwiseAbs().maxCoeff());
      }
      report("unitarity", worst <= 1e-10, "max |U^H U - I| = " + io::format_double(worst));
    }
    {
      double worst = 0.0;
      for (std::int64_t i = 0; i < draws; ++i) {
        RngStream r = root.split(2).split(static_cast<std::uint64_t>(i));
        worst = std::max(worst, std::abs(sensing_optimal_waveform(cfg, r).trace() - cfg.total_power()));
      }
      report("sensing_trace_deterministic", worst <= 1e-10, "max |tr R_x - M P0| = " + io::format_double(worst));
    }
    {
      double worst = 0.0;
      for (std::int64_t i = 0; i < draws; ++i) {
        RngStream r = root.split(3).split(static_cast<std::uint64_t>(i));
        const auto ch = sample_channel(cfg, ChannelKind::communication, r);
        if (ch.blocked) continue;
        const auto wf = water_filling(ch.matrix, cfg.total_power(), cfg.noise_var_c);
        worst = std::max(worst, std::abs(wf.levels.sum() - cfg.total_power()));
      }
      report("water_filling_budget", worst <= 1e-9, "max |sum Lambda - M P0| = " + io::format_double(worst));
    }
    {
      SystemConfig c = cfg;
      c.mc_outer = draws;
      const auto iso = sample_policy(c, isotropic_policy(c), root.split(4));
      const auto wf = sample_policy(c, water_filling_policy(c), root.split(4));
      bool ok = true;
      for (std::size_t i = 0; i < iso.rate_nats.size(); ++i) ok = ok && wf.rate_nats[i] >= iso.rate_nats[i] - 1e-9;
      report("water_filling_dominates_isotropic", ok);
    }
    {
      SystemConfig c = cfg;
      c.mc_outer = draws;
      const auto s = detail::sample_waveforms(c, water_filled_policy(c), root.split(5));
      std::vector<double> inv;
      for (double t : s.traces) inv.push_back(1.0 / t);
      const double lhs = estimate_mean(inv).mean;
      const double rhs = 1.0 / estimate_mean(s.traces).mean;
      report("jensen_trace", lhs >= rhs, "mean(1/tr) = " + io::format_double(lhs) + ", 1/mean(tr) = " +
                                             io::format_double(rhs));
    }
    {
      const RngStream rng = root.split(kBoundsStream);
      try {
        const auto b = evaluate_bounds(cfg, Policy::sense_opt, rng, opt.fault_noise_scale.value_or(1.0));
        report("bound_ordering", ordering_holds(b),
               "poincare = " + io::format_double(b.poincare.value) + ", oracle = " + io::format_double(b.oracle.value) +
                   " +- " + io::format_double(b.oracle.std_error) + ", lmmse = " + io::format_double(b.lmmse.value));
      } catch (const OracleScaleError& e) {
        out << "SKIP bound_ordering  (" << e.what() << ")\n";
      }
    }
    {
      SystemConfig c = cfg;
      c.mc_outer = draws;
      SweepSpec spec;
      const auto region = assemble_region(c, spec, root.split(6));
      const auto bad = region_violations(region);
      report("region_geometry", bad.empty(), bad.empty() ? std::string{} : bad.front());
    }
    out << (all ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
    return static_cast<int>(all ? kOk : kCheckFailed);
  });
}

}  // namespace isac::cli
