// SPDX-License-Identifier: Apache-2.0

#include "drlamr/env/amr_env.hpp"

#include <algorithm>
#include <numeric>
#include <variant>

#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"

namespace drlamr::env
{

InitMode parse_init_mode(const std::string &name)
{
  if (name == "coarse")
  {
    return InitMode::Coarse;
  }
  if (name == "random")
  {
    return InitMode::Random;
  }
  throw ConfigError("unknown init mode '" + name + "' (expected coarse or random)");
}

std::string to_string(InitMode mode) { return mode == InitMode::Coarse ? "coarse" : "random"; }

std::string to_string(DoneReason r)
{
  switch (r)
  {
  case DoneReason::None:
    return "";
  case DoneReason::Overrun:
    return "overrun";
  case DoneReason::SolverFailure:
    return "solver_failure";
  case DoneReason::EpisodeLength:
    return "episode_len";
  case DoneReason::Patience:
    return "patience";
  }
  return "?";
}

void EnvConfig::validate() const
{
  if (gamma_c < 0.0)
  {
    throw ConfigError("gamma_c must be nonnegative");
  }
  if (n_initial_cells < 1 || max_cells < n_initial_cells)
  {
    throw ConfigError("max_cells must be at least the number of initial cells");
  }
  if (episode_len < 1)
  {
    throw ConfigError("episode_len must be positive");
  }
  if (unsteady_step_prob < 0.0 || unsteady_step_prob > 1.0)
  {
    throw ConfigError("unsteady_step_prob must lie in [0, 1]");
  }
  if (n_features < 0 || (n_features > 0 && !features))
  {
    throw ConfigError("physics features declared without a feature function");
  }
}

int DeployOutcome::count(Action executed) const
{
  return static_cast<int>(
      std::count_if(log.begin(), log.end(), [&](const CellDecision &d) { return d.executed == executed; }));
}

AmrEnv::AmrEnv(std::shared_ptr<ForwardModel> model, EnvConfig config, std::uint64_t seed)
    : model_(std::move(model)), config_(std::move(config)), rng_(seed)
{
  config_.validate();
}

Observation AmrEnv::reset(std::uint64_t seed)
{
  rng_.seed(seed);
  return reset();
}

Observation AmrEnv::reset()
{
  mesh_.emplace(model_->domain(), config_.n_initial_cells, config_.max_cells);
  model_->begin_episode(rng_);
  if (config_.init == InitMode::Random)
  {
    const int kmax = config_.random_init_kmax >= 0 ? config_.random_init_kmax : 3 * config_.n_initial_cells;
    const int k = std::uniform_int_distribution<int>(0, kmax)(rng_);
    const double min_w = model_->min_cell_width();
    for (int i = 0; i < k; ++i)
    {
      if (static_cast<double>(mesh_->active_count() + 1) / config_.max_cells > config_.random_init_max_p)
      {
        break;
      }
      std::vector<CellId> candidates;
      for (CellId c : mesh_->active_ids())
      {
        if (0.5 * mesh_->node(c).interval.width() >= min_w)
        {
          candidates.push_back(c);
        }
      }
      if (candidates.empty())
      {
        break;
      }
      mesh_->refine(candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng_)]);
    }
  }
  u_ = model_->solve(*mesh_);
  refresh_jumps();
  steps_ = 0;
  idle_ = 0;
  sample_cell();
  return observe_current();
}

void AmrEnv::refresh_jumps() { jumps_ = fem::interface_jumps(u_); }

void AmrEnv::sample_cell()
{
  const auto &ids = mesh_->active_ids();
  current_pos_ = std::uniform_int_distribution<int>(0, static_cast<int>(ids.size()) - 1)(rng_);
  current_ = ids[current_pos_];
}

Observation AmrEnv::observe_current() const
{
  std::vector<double> extra;
  if (config_.n_features > 0)
  {
    extra = config_.features(u_, current_pos_);
  }
  return observe(jumps_, current_pos_, mesh_->resource_fraction(), extra);
}

StepResult AmrEnv::step(Action action)
{
  if (!mesh_)
  {
    throw std::logic_error("AmrEnv::step called before reset");
  }
  ++steps_;
  StepResult r;
  const Interval cell = mesh_->node(current_).interval;
  const double p_before = mesh_->resource_fraction();
  r.reward.p_before = r.reward.p_after = p_before;

  auto fail = [&](DoneReason why) {
    r.reward = {};
    r.reward.r_total = config_.overrun_penalty;
    r.reward.p_before = p_before;
    r.reward.p_after = mesh_->resource_fraction();
    r.done = r.terminal = true;
    r.reason = why;
  };

  try
  {
    if (model_->is_unsteady() && config_.unsteady_step_prob > 0.0 &&
        std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.unsteady_step_prob)
    {
      model_->advance(u_);
      refresh_jumps();
    }

    bool changed = false;
    if (action == Action::Refine)
    {
      mesh_->refine(current_);
      changed = true;
      r.executed = Action::Refine;
    }
    else if (action == Action::Coarsen)
    {
      if (std::holds_alternative<Coarsened>(mesh_->coarsen(current_)))
      {
        changed = true;
        r.executed = Action::Coarsen;
      }
    }

    idle_ = action == Action::DoNothing ? idle_ + 1 : 0;
    if (changed)
    {
      const double p_after = mesh_->resource_fraction();
      // The barrier is infinite from p = 1 on, so reaching the budget is an overrun.
      if (p_after >= 1.0)
      {
        fail(DoneReason::Overrun);
      }
      else
      {
        DGSolution next = model_->solve(*mesh_);
        const double du = fem::delta_u(u_, next);
        r.reward = reward(r.executed, du, p_before, p_after, config_.gamma_c, config_.barrier);
        u_ = std::move(next);
        refresh_jumps();
      }
    }
  }
  catch (const SingularSystem &)
  {
    fail(DoneReason::SolverFailure);
  }
  catch (const UnstableStep &)
  {
    fail(DoneReason::SolverFailure);
  }
  catch (const DepthLimit &)
  {
    fail(DoneReason::SolverFailure);
  }

  if (!r.done)
  {
    if (steps_ >= config_.episode_len)
    {
      r.done = true;
      r.reason = DoneReason::EpisodeLength;
    }
    else if (config_.do_nothing_patience > 0 && idle_ >= config_.do_nothing_patience)
    {
      r.done = true;
      r.reason = DoneReason::Patience;
    }
  }
  if (!r.terminal)
  {
    sample_cell();
  }
  r.next_obs = observe_current();
  write_trace(r, cell, action);
  return r;
}

void AmrEnv::write_trace(const StepResult &r, const Interval &cell, Action requested) const
{
  if (!trace_)
  {
    return;
  }
  nlohmann::json j{{"step", steps_},
                   {"cell_interval", {cell.lo, cell.hi}},
                   {"action", to_string(requested)},
                   {"executed", to_string(r.executed)},
                   {"r_total", r.reward.r_total},
                   {"r_delta_u", r.reward.r_delta_u},
                   {"r_cost", r.reward.r_cost},
                   {"p_before", r.reward.p_before},
                   {"p_after", r.reward.p_after},
                   {"delta_u", r.reward.delta_u_raw},
                   {"done_reason", to_string(r.reason)}};
  *trace_ << j.dump() << '\n';
}

DeployOutcome deploy_cycle(TreeMesh1D &mesh, const DGSolution &u, const Policy &policy, ForwardModel &model,
                           const EnvConfig &config)
{
  const TreeMesh1D saved = mesh;
  const fem::InterfaceJumps jumps = fem::interface_jumps(u);
  const std::vector<CellId> ids = mesh.active_ids();
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (jumps.per_cell[a] != jumps.per_cell[b])
    {
      return jumps.per_cell[a] > jumps.per_cell[b];
    }
    return to_index(ids[a]) < to_index(ids[b]);
  });

  DeployOutcome out;
  const double min_w = model.min_cell_width();
  for (int pos : order)
  {
    const CellId c = ids[pos];
    if (!mesh.is_active(c))
    {
      continue;
    }
    std::vector<double> extra;
    if (config.n_features > 0)
    {
      extra = config.features(u, pos);
    }
    const Observation o = observe(jumps, pos, mesh.resource_fraction(), extra);
    CellDecision d{mesh.node(c).interval, policy(o), Action::DoNothing};
    if (d.requested == Action::Refine)
    {
      const bool within_budget = mesh.resource_fraction() < 1.0;
      const bool wide_enough = 0.5 * d.cell.width() >= min_w;
      if (within_budget && wide_enough && mesh.node(c).level < TreeMesh1D::kMaxLevel)
      {
        mesh.refine(c);
        d.executed = Action::Refine;
      }
    }
    else if (d.requested == Action::Coarsen)
    {
      if (std::holds_alternative<Coarsened>(mesh.coarsen(c)))
      {
        d.executed = Action::Coarsen;
      }
    }
    out.log.push_back(d);
  }

  try
  {
    out.u = model.resolve(mesh, u);
  }
  catch (const Error &)
  {
    mesh = saved;
    out.u = u;
    out.aborted = true;
  }
  return out;
}

}  // namespace drlamr::env
