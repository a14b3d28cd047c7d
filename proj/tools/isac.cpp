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

#include <CLI11.hpp>

#include "isac/isac.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& config, std::uint64_t& seed,
                std::string& rate_mode, std::string& log_base) {
  cmd->add_option("--config", config, "JSON configuration file (reference defaults when omitted)");
  cmd->add_option("--seed", seed, "override the master seed");
  cmd->add_option("--rate-mode", rate_mode, "asymptotic or finite_T")
      ->check(CLI::IsMember({"asymptotic", "finite_T"}));
  cmd->add_option("--log-base", log_base, "2 or e")->check(CLI::IsMember({"2", "e"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensing/communication tradeoff region estimator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ISAC_VERSION);

  isac::cli::RunOptions opt;
  std::string config, rate_mode, log_base, lambdas, out_dir = ".";
  std::uint64_t seed = 0;

  auto* region = app.add_subcommand("region", "estimate the rate/eps region");
  add_common(region, config, seed, rate_mode, log_base);
  region->add_option("--out", out_dir, "output directory");
  region->add_option("--lambdas", lambdas, "comma separated sweep weights");

  auto* bounds = app.add_subcommand("bounds", "evaluate sensing bounds for both corner waveforms");
  add_common(bounds, config, seed, rate_mode, log_base);
  bounds->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "run the invariant checks");
  add_common(validate, config, seed, rate_mode, log_base);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : isac::cli::kConfigError;
  }

  auto* cmd = app.get_subcommands().front();
  if (!config.empty()) opt.config_path = config;
  if (cmd->count("--seed")) opt.seed = seed;
  if (!rate_mode.empty()) opt.rate_mode = rate_mode == "finite_T" ? isac::RateMode::finite_t : isac::RateMode::asymptotic;
  if (!log_base.empty()) opt.log_base = log_base == "e" ? isac::LogBase::e : isac::LogBase::two;
  opt.out_dir = out_dir;
  if (!lambdas.empty()) {
    try {
      opt.lambdas = isac::cli::parse_lambda_list(lambdas);
    } catch (const isac::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return isac::cli::kConfigError;
    }
  }

  if (cmd == region) return isac::cli::run_region(opt);
  if (cmd == bounds) return isac::cli::run_bounds(opt);
  return isac::cli::run_validate(opt);
}
