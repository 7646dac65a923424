// SPDX-License-Identifier: Apache-2.0

#include "drlamr/app/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "drlamr/error.hpp"
#include "drlamr/fem/legendre.hpp"
#include "drlamr/fem/measures.hpp"
#include "drlamr/indicators/indicators.hpp"

namespace drlamr::app
{

namespace
{

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int count_dofs(const ExperimentCase &c, const fem::DGSolution &u)
{
  return c.hybridized() ? fem::hdg_dof_count(u).total() : fem::dof_count(u);
}

void require_steady(const ExperimentCase &c, const char *verb)
{
  if (c.unsteady())
  {
    throw ConfigError(std::string(verb) + ": " + to_string(c.kind) + " is time-dependent; use the unsteady command");
  }
}

// Initial data as a forward model: every mesh gets the projection of u(., t).
class ProjectionModel : public env::ForwardModel
{
public:
  ProjectionModel(fem::ScalarFunction f, Interval domain, int p, double min_width)
      : f_(std::move(f)), domain_(domain), p_(p), min_width_(min_width)
  {
  }
  Interval domain() const override { return domain_; }
  int p_order() const override { return p_; }
  fem::DGSolution solve(const TreeMesh1D &mesh) override
  {
    return fem::project(f_, mesh.active_intervals(), p_, fem::load_points(p_));
  }
  double min_cell_width() const override { return min_width_; }

private:
  fem::ScalarFunction f_;
  Interval domain_;
  int p_;
  double min_width_;
};

indicators::IndicatorFn make_indicator(const RunConfig &config, const env::ForwardModel &model)
{
  if (indicators::parse_indicator(config.indicator) == indicators::IndicatorKind::Kelly)
  {
    const auto opts = model.kelly_options();
    return [opts](const fem::DGSolution &u) { return indicators::kelly_indicator(u, opts); };
  }
  return [](const fem::DGSolution &u) { return indicators::gradient_indicator(u); };
}

}  // namespace

std::vector<std::string> obs_layout()
{
  return {"log_jump_self", "log_jump_left", "log_jump_right", "log_jump_mean", "resource"};
}

rl::EnvFactory make_env_factory(const RunConfig &config)
{
  config.validate();
  const ExperimentCase c = config.experiment();
  const int p = config.resolved_p();
  const env::EnvConfig base = env_config(config);
  return [c, p, base](std::uint64_t seed, bool split_mode) -> std::unique_ptr<rl::Environment> {
    env::EnvConfig ec = base;
    if (split_mode)
    {
      ec.gamma_c = 0.0;
    }
    return std::make_unique<rl::AmrEnvironment>(std::make_unique<env::AmrEnv>(make_model(c, p), ec, seed));
  };
}

TrainOutput run_train(const RunConfig &config, std::ostream *log)
{
  TrainOutput out;
  out.result = rl::train_dqn(make_env_factory(config), train_config(config), log);
  out.meta.obs_layout = obs_layout();
  out.meta.split_mode = config.train.split_mode;
  out.meta.case_name = config.case_name;
  out.meta.barrier = config.barrier;
  out.meta.max_cells = config.max_cells;
  out.meta.gamma_c = config.gamma_c;
  out.meta.config_hash = config_hash(config);
  return out;
}

void check_model(const rl::QNetwork &net, const rl::ModelMeta &meta)
{
  if (meta.obs_layout != obs_layout() || net.obs_dim() != env::kBaseObsDim)
  {
    throw ConfigError("model observation layout does not match this build's observation");
  }
  if (net.n_actions() != env::kNumActions)
  {
    throw ConfigError("model has " + std::to_string(net.n_actions()) + " outputs, expected " +
                      std::to_string(env::kNumActions));
  }
}

env::Policy policy_for(const rl::QNetwork &net, const rl::ModelMeta &meta, const RunConfig &config)
{
  check_model(net, meta);
  if (meta.split_mode)
  {
    rl::TunablePolicy tp{net, {env::parse_barrier(config.barrier), config.max_cells}};
    return rl::tunable_policy(tp, config.gamma_c);
  }
  return rl::greedy_policy(net);
}

CycleRun run_deploy(const rl::QNetwork &net, const rl::ModelMeta &meta, const RunConfig &config)
{
  const env::Policy policy = policy_for(net, meta, config);
  return run_deploy(policy, config);
}

CycleRun run_deploy(const env::Policy &policy, const RunConfig &config)
{
  config.validate();
  const ExperimentCase c = config.experiment();
  require_steady(c, "deploy");
  auto model = make_model(c, config.resolved_p());
  const env::EnvConfig ec = env_config(config);
  const auto exact = c.exact_at(0.0);

  CycleRun run;
  run.mesh = TreeMesh1D(c.domain, config.resolved_initial_cells(), config.max_cells);
  run.u = model->solve(run.mesh);
  run.rows.push_back({0, run.mesh.active_count(), count_dofs(c, run.u), fem::l2_error(run.u, exact), 0, 0, 0});
  for (int k = 1; k <= config.cycles; ++k)
  {
    env::DeployOutcome o = env::deploy_cycle(run.mesh, run.u, policy, *model, ec);
    run.u = std::move(o.u);
    run.decisions.insert(run.decisions.end(), o.log.begin(), o.log.end());
    run.rows.push_back({k, run.mesh.active_count(), count_dofs(c, run.u), fem::l2_error(run.u, exact),
                        o.count(env::Action::Refine), o.count(env::Action::Coarsen),
                        o.count(env::Action::DoNothing)});
  }
  return run;
}

CycleRun run_baseline(const RunConfig &config)
{
  config.validate();
  const ExperimentCase c = config.experiment();
  require_steady(c, "baseline");
  auto model = make_model(c, config.resolved_p());
  const auto indicator = make_indicator(config, *model);
  const auto strategy = indicators::MarkingStrategy::parse(config.strategy);
  const auto exact = c.exact_at(0.0);
  indicators::HeuristicOptions opts;
  opts.min_cell_width = model->min_cell_width();
  const indicators::SolveFn solve = [&](const TreeMesh1D &mesh, const fem::DGSolution &) {
    return model->solve(mesh);
  };

  CycleRun run;
  run.mesh = TreeMesh1D(c.domain, config.resolved_initial_cells(), config.max_cells);
  run.u = model->solve(run.mesh);
  run.rows.push_back({0, run.mesh.active_count(), count_dofs(c, run.u), fem::l2_error(run.u, exact), 0, 0, 0});
  for (int k = 1; k <= config.cycles; ++k)
  {
    indicators::CycleOutcome o = indicators::heuristic_cycle(run.mesh, run.u, indicator, strategy, solve, opts);
    run.u = std::move(o.u);
    run.rows.push_back({k, run.mesh.active_count(), count_dofs(c, run.u), fem::l2_error(run.u, exact), o.n_refine,
                        o.n_coarsen, o.n_nothing});
  }
  return run;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig &config)
{
  config.validate();
  const ExperimentCase c = config.experiment();
  require_steady(c, "convergence");
  auto model = make_model(c, config.resolved_p());
  const auto exact = c.exact_at(0.0);
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l <= config.levels; ++l)
  {
    const int n = config.resolved_initial_cells() << l;
    const TreeMesh1D mesh(c.domain, n, n);
    const fem::DGSolution u = model->solve(mesh);
    ConvergenceRow r{c.domain.width() / n, count_dofs(c, u), fem::l2_error(u, exact), std::nullopt};
    if (!rows.empty() && rows.back().l2_error > 0.0 && r.l2_error > 0.0)
    {
      r.observed_order = std::log(rows.back().l2_error / r.l2_error) / std::log(rows.back().h / r.h);
    }
    rows.push_back(r);
  }
  return rows;
}

double fitted_order(const std::vector<ConvergenceRow> &rows, int n)
{
  if (n < 2 || static_cast<int>(rows.size()) < n)
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = rows.size() - n; i < rows.size(); ++i)
  {
    if (!(rows[i].l2_error > 0.0))
    {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double x = std::log(rows[i].h), y = std::log(rows[i].l2_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double UnsteadyRun::mean_cells() const
{
  if (rows.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (const auto &r : rows)
  {
    s += r.cells;
  }
  return s / static_cast<double>(rows.size());
}

UnsteadyRun run_unsteady(const RunConfig &config, const env::Policy *policy)
{
  config.validate();
  const ExperimentCase c = config.experiment();
  if (!c.unsteady())
  {
    throw ConfigError("unsteady: " + to_string(c.kind) + " is not time-dependent");
  }
  const int p = config.resolved_p();
  auto model = std::make_shared<env::UnsteadyAdvectionModel>(advection_problem(c), c.domain, p, c.params.dt,
                                                             c.params.t_final);
  model->set_step(0);
  ProjectionModel initial(c.exact_at(0.0), c.domain, p, model->min_cell_width());
  const env::EnvConfig ec = env_config(config);
  const int cap = policy ? config.max_cells : std::numeric_limits<int>::max() / 2;

  UnsteadyRun run;
  run.mesh = TreeMesh1D(c.domain, config.resolved_initial_cells(), cap);
  run.u = initial.solve(run.mesh);

  std::optional<indicators::IndicatorFn> indicator;
  std::optional<indicators::MarkingStrategy> strategy;
  indicators::HeuristicOptions opts;
  opts.min_cell_width = model->min_cell_width();
  if (!policy)
  {
    indicator = make_indicator(config, *model);
    strategy = indicators::MarkingStrategy::parse(config.strategy);
  }
  auto cycle = [&](env::ForwardModel &m) {
    if (policy)
    {
      run.u = env::deploy_cycle(run.mesh, run.u, *policy, m, ec).u;
    }
    else
    {
      const indicators::SolveFn solve = [&](const TreeMesh1D &mesh, const fem::DGSolution &prev) {
        return m.resolve(mesh, prev);
      };
      run.u = indicators::heuristic_cycle(run.mesh, run.u, *indicator, *strategy, solve, opts).u;
    }
  };
  auto record = [&](int step) {
    const double t = step * c.params.dt;
    run.rows.push_back(
        {step, t, run.mesh.active_count(), fem::dof_count(run.u), fem::l2_error(run.u, c.exact_at(t))});
  };

  // Adapt to the initial condition, re-projecting it after every cycle.
  for (int k = 0; k < config.cycles; ++k)
  {
    cycle(initial);
  }
  record(0);
  const int n = model->n_steps_total();
  for (int k = 1; k <= n; ++k)
  {
    cycle(*model);
    model->advance(run.u);
    record(k);
  }
  return run;
}

std::vector<IntrospectRow> run_introspect(const rl::QNetwork &net, const rl::ModelMeta &meta,
                                          const RunConfig &config)
{
  config.validate();
  const env::Policy policy = policy_for(net, meta, config);
  const auto &g = config.introspect;
  std::vector<IntrospectRow> rows;
  for (double p : g.p)
  {
    for (int i = 0; i < g.n; ++i)
    {
      const double self = g.lo + (g.hi - g.lo) * i / (g.n - 1);
      for (int j = 0; j < g.n; ++j)
      {
        const double mean = g.lo + (g.hi - g.lo) * j / (g.n - 1);
        rows.push_back({p, self, mean, policy({self, self, self, mean, p})});
      }
    }
  }
  return rows;
}

void write_cycle_csv(std::ostream &out, const std::vector<CycleRow> &rows)
{
  out << "# schema=cycles/v1\n" << kCycleHeader << '\n';
  for (const auto &r : rows)
  {
    out << r.cycle << ',' << r.cells << ',' << r.dofs << ',' << num(r.l2_error) << ',' << r.n_refine << ','
        << r.n_coarsen << ',' << r.n_nothing << '\n';
  }
}

void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRow> &rows)
{
  out << "# schema=convergence/v1\n" << kConvergenceHeader << '\n';
  for (const auto &r : rows)
  {
    out << num(r.h) << ',' << r.dofs << ',' << num(r.l2_error) << ','
        << (r.observed_order ? num(*r.observed_order) : "") << '\n';
  }
}

void write_unsteady_csv(std::ostream &out, const std::vector<UnsteadyRow> &rows)
{
  out << "# schema=unsteady/v1\n" << kUnsteadyHeader << '\n';
  for (const auto &r : rows)
  {
    out << r.step << ',' << num(r.time) << ',' << r.cells << ',' << r.dofs << ',' << num(r.l2_error) << '\n';
  }
}

void write_introspect_csv(std::ostream &out, const std::vector<IntrospectRow> &rows)
{
  out << "# schema=introspect/v1\n" << kIntrospectHeader << '\n';
  for (const auto &r : rows)
  {
    out << num(r.p) << ',' << num(r.log_jump_self) << ',' << num(r.log_jump_mean) << ',' << env::to_string(r.action)
        << '\n';
  }
}

}  // namespace drlamr::app
