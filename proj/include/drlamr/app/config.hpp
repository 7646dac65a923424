// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drlamr/app/cases.hpp"
#include "drlamr/env/amr_env.hpp"
#include "drlamr/rl/dqn.hpp"

namespace drlamr::app
{

struct IntrospectSpec
{
  std::vector<double> p{0.3, 0.5, 0.7};
  int n = 61;  // grid points per axis
  double lo = -16.0;
  double hi = -1.0;
};

struct RunConfig
{
  std::string case_name = "SteadyAdv1D";
  std::optional<int> p_order;
  std::optional<int> n_initial_cells;
  int max_cells = 25;
  double gamma_c = 25.0;
  std::string barrier = "sqrt";
  int cycles = 6;
  std::uint64_t seed = 0;
  std::string init = "coarse";
  int episode_len = 200;
  int do_nothing_patience = 10;
  double unsteady_step_prob = 0.1;
  double overrun_penalty = -1000.0;
  int gen_n = 2;
  double dt = 0.01;
  double t_final = 7.0;
  std::string indicator = "gradient";
  std::string strategy = "bulk:0.5:0.5";
  int levels = 4;
  std::string out_dir = ".";
  std::string model;
  rl::TrainConfig train;
  IntrospectSpec introspect;

  CaseKind case_kind() const { return parse_case(case_name); }
  ExperimentCase experiment() const;
  int resolved_p() const;
  int resolved_initial_cells() const;
  // Throws ConfigError on any out-of-range or unparsable field.
  void validate() const;
};

// Strict parse: unknown keys and type errors raise ConfigError with the line
// on which the offending key appears.
RunConfig parse_run_config(const std::string &text);
RunConfig load_run_config(const std::string &path);
nlohmann::json to_json(const RunConfig &config);
// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const RunConfig &config);

env::EnvConfig env_config(const RunConfig &config);
rl::TrainConfig train_config(const RunConfig &config);

}  // namespace drlamr::app
