// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "drlamr/env/forward_model.hpp"
#include "drlamr/env/reward.hpp"
#include "drlamr/fem/measures.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::env
{

enum class InitMode
{
  Coarse,
  Random
};

InitMode parse_init_mode(const std::string &name);
std::string to_string(InitMode mode);

// Extra observation entries for the cell at `position`.
using FeatureFn = std::function<std::vector<double>(const DGSolution &u, int position)>;

struct EnvConfig
{
  double gamma_c = 25.0;
  BarrierKind barrier = BarrierKind::Sqrt;
  int max_cells = 25;
  int n_initial_cells = 4;
  int episode_len = 200;
  double overrun_penalty = -1000.0;
  InitMode init = InitMode::Coarse;
  int do_nothing_patience = 10;
  double unsteady_step_prob = 0.1;
  int random_init_kmax = -1;  // < 0 means 3 * n_initial_cells
  double random_init_max_p = 0.9;
  FeatureFn features;
  int n_features = 0;

  int obs_dim() const { return kBaseObsDim + n_features; }
  void validate() const;
};

enum class DoneReason
{
  None,
  Overrun,
  SolverFailure,
  EpisodeLength,
  Patience
};
std::string to_string(DoneReason r);

struct StepResult
{
  RewardBreakdown reward;
  Action executed = Action::DoNothing;  // after infeasible-coarsen fallback
  bool done = false;
  bool terminal = false;  // true when the episode ended by failure rather than by a time limit
  DoneReason reason = DoneReason::None;
  Observation next_obs;
};

class AmrEnv
{
public:
  AmrEnv(std::shared_ptr<ForwardModel> model, EnvConfig config, std::uint64_t seed = 0);

  Observation reset();
  Observation reset(std::uint64_t seed);
  StepResult step(Action action);

  int obs_dim() const { return config_.obs_dim(); }
  const EnvConfig &config() const { return config_; }
  EnvConfig &mutable_config() { return config_; }
  const TreeMesh1D &mesh() const { return *mesh_; }
  const DGSolution &solution() const { return u_; }
  CellId current_cell() const { return current_; }
  int steps_taken() const { return steps_; }
  ForwardModel &model() { return *model_; }

  // JSONL record per step; pass nullptr to disable.
  void set_trace(std::ostream *out) { trace_ = out; }

private:
  void refresh_jumps();
  Observation observe_current() const;
  void sample_cell();
  void write_trace(const StepResult &r, const Interval &cell, Action requested) const;

  std::shared_ptr<ForwardModel> model_;
  EnvConfig config_;
  std::mt19937_64 rng_;
  std::optional<TreeMesh1D> mesh_;
  DGSolution u_;
  fem::InterfaceJumps jumps_;
  CellId current_{};
  int current_pos_ = 0;
  int steps_ = 0;
  int idle_ = 0;
  std::ostream *trace_ = nullptr;
};

// Greedy policy over observations.
using Policy = std::function<Action(const Observation &)>;

struct CellDecision
{
  Interval cell;
  Action requested = Action::DoNothing;
  Action executed = Action::DoNothing;
};

struct DeployOutcome
{
  DGSolution u;
  std::vector<CellDecision> log;
  bool aborted = false;
  int count(Action executed) const;
};

// One deployment cycle: visit cells by pre-cycle jump (largest first), act
// immediately with the refreshed p, then solve once. On a solver failure the
// mesh is restored and the previous solution returned with aborted = true.
DeployOutcome deploy_cycle(TreeMesh1D &mesh, const DGSolution &u, const Policy &policy, ForwardModel &model,
                           const EnvConfig &config);

}  // namespace drlamr::env
