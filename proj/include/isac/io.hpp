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

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "isac/config.hpp"
#include "isac/sensing.hpp"
#include "isac/types.hpp"

namespace isac::io {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

/// Writes `bytes` to `path` via a temporary file in the same directory and a
/// rename, so readers never observe a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline constexpr std::string_view kRegionHeader = "lambda,rate,rate_stderr,eps,eps_stderr,policy";
inline constexpr std::string_view kBoundsHeader = "policy,kind,value,stderr";

inline std::string region_row(const TradeoffPoint& p) {
  std::string s;
  s += format_double(p.lambda) + ',';
  s += format_double(p.rate) + ',';
  s += format_double(p.rate_stderr) + ',';
  s += format_double(p.eps) + ',';
  s += format_double(p.eps_stderr) + ',';
  s += to_string(p.policy);
  return s;
}

/// Sweep rows in rate order, then the two corner rows.
inline std::string region_csv(const RegionResult& r, bool include_corners) {
  std::string s(kRegionHeader);
  s += '\n';
  for (const auto& p : r.sweep) s += region_row(p) + '\n';
  if (include_corners) {
    s += region_row(r.sense_corner) + '\n';
    s += region_row(r.comm_corner) + '\n';
  }
  return s;
}

struct BoundsRow {
  Policy policy;
  SensingBound bound;
};

inline std::string bounds_csv(std::span<const BoundsRow> rows) {
  std::string s(kBoundsHeader);
  s += '\n';
  for (const auto& r : rows) {
    s += std::string(to_string(r.policy)) + ',' + std::string(to_string(r.bound.kind)) + ',' +
         format_double(r.bound.value) + ',' + format_double(r.bound.std_error) + '\n';
  }
  return s;
}

inline nlohmann::json point_json(const TradeoffPoint& p) {
  nlohmann::json j;
  j["lambda"] = std::isfinite(p.lambda) ? nlohmann::json(p.lambda) : nlohmann::json(nullptr);
  j["rate"] = p.rate;
  j["raw_rate"] = p.raw_rate;
  j["rate_stderr"] = p.rate_stderr;
  j["eps"] = p.eps;
  j["eps_stderr"] = p.eps_stderr;
  j["policy"] = std::string(to_string(p.policy));
  return j;
}

inline nlohmann::json corners_json(const RegionResult& r, const SystemConfig& cfg) {
  nlohmann::json j;
  j["rate_unit"] = std::string(rate_unit(cfg.log_base));
  j["rate_mode"] = std::string(to_string(cfg.rate_mode));
  j["sense_opt"] = point_json(r.sense_corner);
  j["comm_opt"] = point_json(r.comm_corner);
  j["converse"] = {{"eps_min", r.converse.eps_min}, {"rate_max", r.converse.rate_max}};
  auto ts = nlohmann::json::array();
  for (const auto& p : r.timeshare) {
    auto pj = point_json(p);
    pj.erase("lambda");
    pj["theta"] = p.lambda;
    ts.push_back(pj);
  }
  j["time_share"] = ts;
  return j;
}

}  // namespace isac::io
