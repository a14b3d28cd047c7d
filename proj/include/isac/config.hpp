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
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "isac/types.hpp"

namespace isac {

enum class LogBase { two, e };
enum class RateMode { asymptotic, finite_t };
enum class InnerIntegral { closed_form, monte_carlo };

inline std::string_view to_string(LogBase b) { return b == LogBase::two ? "2" : "e"; }
inline std::string_view rate_unit(LogBase b) {
  return b == LogBase::two ? "bits/channel-use" : "nats/channel-use";
}
inline std::string_view to_string(RateMode m) {
  return m == RateMode::asymptotic ? "asymptotic" : "finite_T";
}
inline std::string_view to_string(InnerIntegral i) {
  return i == InnerIntegral::closed_form ? "closed_form" : "monte_carlo";
}

/// Converts a value in nats to the requested unit.
inline double from_nats(double nats, LogBase base) {
  return base == LogBase::two ? nats / std::log(2.0) : nats;
}

/// Linear noise variance for a transmit SNR P0/sigma^2 given in dB.
inline double noise_var_from_snr_db(double power, double snr_db) {
  return power * std::pow(10.0, -snr_db / 10.0);
}

/// All scalar model parameters. Defaults are the reference operating point:
/// 4x4x4 antennas, T = 16, sensing blockage 0.6, no communication blockage,
/// 24 dB transmit SNR on both links, sensing channel variance 1/M.
struct SystemConfig {
  int tx_antennas = 4;  // M
  int sense_rx = 4;     // N_s
  int comm_rx = 4;      // N_c
  int coherence = 16;   // T
  double alpha_s = 0.4;
  double alpha_c = 1.0;
  double power = 1.0;  // per-antenna average power P0
  double noise_var_s = noise_var_from_snr_db(1.0, 24.0);
  double noise_var_c = noise_var_from_snr_db(1.0, 24.0);
  double chan_var_s = 0.25;
  double chan_var_c = 1.0;
  std::int64_t mc_outer = 10000;
  std::int64_t mc_inner = 500;
  std::uint64_t seed = 20240901;

  LogBase log_base = LogBase::two;
  RateMode rate_mode = RateMode::asymptotic;
  InnerIntegral inner_integral = InnerIntegral::closed_form;
  // Optional cap on the Poincare value of admissible sweep policies.
  std::optional<double> eps_alpha;
  // Largest realized unknown dimension 2*N_s*M the exact-MMSE oracle accepts.
  int oracle_cap = 64;

  double total_power() const noexcept { return tx_antennas * power; }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Returns `cfg` unchanged when every invariant holds, throws ConfigError
/// naming the offending field otherwise.
inline const SystemConfig& validate_config(const SystemConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.tx_antennas < 1) fail("tx_antennas must be positive");
  if (cfg.sense_rx < 1) fail("sense_rx must be positive");
  if (cfg.comm_rx < 1) fail("comm_rx must be positive");
  if (cfg.coherence < 1) fail("coherence must be positive");
  if (cfg.coherence < cfg.tx_antennas) {
    fail("T < M: coherence (" + std::to_string(cfg.coherence) + ") must be at least tx_antennas (" +
         std::to_string(cfg.tx_antennas) + ")");
  }
  if (!(cfg.alpha_s > 0.0 && cfg.alpha_s <= 1.0)) fail("alpha_s out of (0,1]");
  if (!(cfg.alpha_c > 0.0 && cfg.alpha_c <= 1.0)) fail("alpha_c out of (0,1]");
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be a positive finite number");
  };
  positive(cfg.power, "power");
  positive(cfg.noise_var_s, "noise_var_s");
  positive(cfg.noise_var_c, "noise_var_c");
  positive(cfg.chan_var_s, "chan_var_s");
  positive(cfg.chan_var_c, "chan_var_c");
  if (cfg.mc_outer < 1) fail("mc_outer must be positive");
  if (cfg.mc_inner < 1) fail("mc_inner must be positive");
  if (cfg.eps_alpha && !(*cfg.eps_alpha > 0.0)) fail("eps_alpha must be positive when set");
  if (cfg.oracle_cap < 2) fail("oracle_cap must be at least 2");
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const SystemConfig& cfg) {
  nlohmann::json j;
  j["tx_antennas"] = cfg.tx_antennas;
  j["sense_rx"] = cfg.sense_rx;
  j["comm_rx"] = cfg.comm_rx;
  j["coherence"] = cfg.coherence;
  j["alpha_s"] = cfg.alpha_s;
  j["alpha_c"] = cfg.alpha_c;
  j["power"] = cfg.power;
  j["noise_var_s"] = cfg.noise_var_s;
  j["noise_var_c"] = cfg.noise_var_c;
  j["chan_var_s"] = cfg.chan_var_s;
  j["chan_var_c"] = cfg.chan_var_c;
  j["mc_outer"] = cfg.mc_outer;
  j["mc_inner"] = cfg.mc_inner;
  j["seed"] = cfg.seed;
  j["log_base"] = std::string(to_string(cfg.log_base));
  j["rate_mode"] = std::string(to_string(cfg.rate_mode));
  j["inner_integral"] = std::string(to_string(cfg.inner_integral));
  if (cfg.eps_alpha) j["eps_alpha"] = *cfg.eps_alpha;
  j["oracle_cap"] = cfg.oracle_cap;
  return j;
}

/// Parses a configuration document. Every key is optional and falls back to
/// the reference defaults; unknown keys are rejected. Noise levels may be
/// given either linearly (`noise_var_s`) or as transmit SNR P0/sigma^2 in dB
/// (`snr_s_db`), never both.
inline SystemConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "tx_antennas", "sense_rx",  "comm_rx",   "coherence", "alpha_s",        "alpha_c",
      "power",       "noise_var_s", "noise_var_c", "snr_s_db", "snr_c_db",     "chan_var_s",
      "chan_var_c",  "mc_outer",  "mc_inner",  "seed",      "log_base",       "rate_mode",
      "inner_integral", "eps_alpha", "oracle_cap"};
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }

  SystemConfig cfg;
  auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  };
  read("tx_antennas", cfg.tx_antennas);
  read("sense_rx", cfg.sense_rx);
  read("comm_rx", cfg.comm_rx);
  read("coherence", cfg.coherence);
  read("alpha_s", cfg.alpha_s);
  read("alpha_c", cfg.alpha_c);
  read("power", cfg.power);
  read("chan_var_s", cfg.chan_var_s);
  read("chan_var_c", cfg.chan_var_c);
  read("mc_outer", cfg.mc_outer);
  read("mc_inner", cfg.mc_inner);
  read("seed", cfg.seed);
  read("oracle_cap", cfg.oracle_cap);

  auto noise = [&](const char* linear, const char* db, double& field) {
    if (j.contains(linear) && j.contains(db)) {
      throw ConfigError(std::string("give either '") + linear + "' or '" + db + "', not both");
    }
    read(linear, field);
    if (j.contains(db)) {
      double snr = 0.0;
      read(db, snr);
      field = noise_var_from_snr_db(cfg.power, snr);
    }
  };
  noise("noise_var_s", "snr_s_db", cfg.noise_var_s);
  noise("noise_var_c", "snr_c_db", cfg.noise_var_c);

  if (j.contains("log_base")) {
    std::string b;
    const auto& v = j.at("log_base");
    if (v.is_number()) b = std::to_string(v.get<int>());
    else read("log_base", b);
    if (b == "2") cfg.log_base = LogBase::two;
    else if (b == "e") cfg.log_base = LogBase::e;
    else throw ConfigError("log_base must be \"2\" or \"e\"");
  }
  if (j.contains("rate_mode")) {
    std::string m;
    read("rate_mode", m);
    if (m == "asymptotic") cfg.rate_mode = RateMode::asymptotic;
    else if (m == "finite_T") cfg.rate_mode = RateMode::finite_t;
    else throw ConfigError("rate_mode must be \"asymptotic\" or \"finite_T\"");
  }
  if (j.contains("inner_integral")) {
    std::string m;
    read("inner_integral", m);
    if (m == "closed_form") cfg.inner_integral = InnerIntegral::closed_form;
    else if (m == "monte_carlo") cfg.inner_integral = InnerIntegral::monte_carlo;
    else throw ConfigError("inner_integral must be \"closed_form\" or \"monte_carlo\"");
  }
  if (j.contains("eps_alpha") && !j.at("eps_alpha").is_null()) {
    double e = 0.0;
    read("eps_alpha", e);
    cfg.eps_alpha = e;
  }
  validate_config(cfg);
  return cfg;
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace isac
