// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "drlamr/app/config.hpp"
#include "drlamr/env/amr_env.hpp"
#include "drlamr/mesh/tree_mesh.hpp"
#include "drlamr/rl/dqn.hpp"
#include "drlamr/rl/qnetwork.hpp"

namespace drlamr::app
{

// Names of the observation entries, in order.
std::vector<std::string> obs_layout();

// ---- training

struct TrainOutput
{
  rl::TrainResult result;
  rl::ModelMeta meta;
};

rl::EnvFactory make_env_factory(const RunConfig &config);
TrainOutput run_train(const RunConfig &config, std::ostream *log = nullptr);

// ---- AMR cycle studies (deploy and baseline share this row type)

struct CycleRow
{
  int cycle = 0;
  int cells = 0;
  int dofs = 0;
  double l2_error = 0.0;
  int n_refine = 0;
  int n_coarsen = 0;  // coarsened sibling pairs
  int n_nothing = 0;
};

struct CycleRun
{
  std::vector<CycleRow> rows;
  TreeMesh1D mesh{Interval{0.0, 1.0}, 1, 1};
  fem::DGSolution u;
  std::vector<env::CellDecision> decisions;  // deploy only, all cycles
};

// Greedy policy for plain models, tunable policy at config.gamma_c for
// split-mode models.
env::Policy policy_for(const rl::QNetwork &net, const rl::ModelMeta &meta, const RunConfig &config);
// Throws ConfigError when the model cannot be used with this configuration.
void check_model(const rl::QNetwork &net, const rl::ModelMeta &meta);

CycleRun run_deploy(const rl::QNetwork &net, const rl::ModelMeta &meta, const RunConfig &config);
CycleRun run_deploy(const env::Policy &policy, const RunConfig &config);
CycleRun run_baseline(const RunConfig &config);

// ---- uniform refinement study

struct ConvergenceRow
{
  double h = 0.0;
  int dofs = 0;
  double l2_error = 0.0;
  std::optional<double> observed_order;  // absent on the first level
};

std::vector<ConvergenceRow> run_convergence(const RunConfig &config);
// Least-squares slope of log(error) against log(h) over the last `n` rows.
double fitted_order(const std::vector<ConvergenceRow> &rows, int n);

// ---- time-dependent AMR

struct UnsteadyRow
{
  int step = 0;
  double time = 0.0;
  int cells = 0;
  int dofs = 0;
  double l2_error = 0.0;
};

struct UnsteadyRun
{
  std::vector<UnsteadyRow> rows;
  TreeMesh1D mesh{Interval{0.0, 1.0}, 1, 1};
  fem::DGSolution u;
  double mean_cells() const;
};

// One AMR cycle per time step, then one LSERK-45 step. With a policy the
// mesh is capped at config.max_cells; the heuristic runs without a cap.
UnsteadyRun run_unsteady(const RunConfig &config, const env::Policy *policy = nullptr);

// ---- policy introspection

struct IntrospectRow
{
  double p = 0.0;
  double log_jump_self = 0.0;
  double log_jump_mean = 0.0;
  env::Action action = env::Action::DoNothing;
};

std::vector<IntrospectRow> run_introspect(const rl::QNetwork &net, const rl::ModelMeta &meta,
                                          const RunConfig &config);

// ---- CSV output; each file starts with a '# schema=<kind>/v1' line

void write_cycle_csv(std::ostream &out, const std::vector<CycleRow> &rows);
void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRow> &rows);
void write_unsteady_csv(std::ostream &out, const std::vector<UnsteadyRow> &rows);
void write_introspect_csv(std::ostream &out, const std::vector<IntrospectRow> &rows);

inline constexpr const char *kCycleHeader = "cycle,cells,dofs,l2_error,n_refine,n_coarsen,n_nothing";
inline constexpr const char *kConvergenceHeader = "h,dofs,l2_error,observed_order";
inline constexpr const char *kUnsteadyHeader = "step,time,cells,dofs,l2_error";
inline constexpr const char *kIntrospectHeader = "p,log_jump_self,log_jump_mean,action";

}  // namespace drlamr::app
