// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drlamr/app/commands.hpp"
#include "drlamr/app/config.hpp"
#include "drlamr/error.hpp"

namespace fs = std::filesystem;
using namespace drlamr;

namespace
{

struct Overrides
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> budget;
  std::optional<int> cycles;
  std::optional<std::string> case_name;
  std::optional<int> porder;
  std::optional<std::string> model;
  std::optional<std::string> indicator;
  std::optional<std::string> strategy;
  std::optional<int> levels;
  std::optional<double> t_final;
  std::optional<double> gamma_c;
  std::optional<long> steps;
  std::vector<double> p;
  std::optional<int> grid;
  bool heuristic = false;
};

void add_common(CLI::App *cmd, Overrides &o)
{
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--budget", o.budget, "maximum number of cells");
  cmd->add_option("--cycles", o.cycles, "number of AMR cycles");
  cmd->add_option("--case", o.case_name, "SteadyAdv1D, SteadyAdvGen1D, UnsteadyAdv1D, PoissonHDG1D or ConstantAdv");
  cmd->add_option("--porder", o.porder, "polynomial order");
}

app::RunConfig resolve(const Overrides &o)
{
  app::RunConfig c = o.config.empty() ? app::RunConfig{} : app::load_run_config(o.config);
  if (o.seed)
  {
    c.seed = *o.seed;
  }
  if (o.out_dir)
  {
    c.out_dir = *o.out_dir;
  }
  if (o.budget)
  {
    c.max_cells = *o.budget;
  }
  if (o.cycles)
  {
    c.cycles = *o.cycles;
  }
  if (o.case_name)
  {
    c.case_name = *o.case_name;
  }
  if (o.porder)
  {
    c.p_order = *o.porder;
  }
  if (o.model)
  {
    c.model = *o.model;
  }
  if (o.indicator)
  {
    c.indicator = *o.indicator;
  }
  if (o.strategy)
  {
    c.strategy = *o.strategy;
  }
  if (o.levels)
  {
    c.levels = *o.levels;
  }
  if (o.t_final)
  {
    c.t_final = *o.t_final;
  }
  if (o.gamma_c)
  {
    c.gamma_c = *o.gamma_c;
  }
  if (o.steps)
  {
    c.train.total_steps = *o.steps;
  }
  if (!o.p.empty())
  {
    c.introspect.p = o.p;
  }
  if (o.grid)
  {
    c.introspect.n = *o.grid;
  }
  c.train.seed = c.seed;
  c.validate();
  return c;
}

fs::path output(const app::RunConfig &c, const std::string &name)
{
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

void write_text(const fs::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

rl::QNetwork load(const app::RunConfig &c, rl::ModelMeta &meta)
{
  if (c.model.empty())
  {
    throw ConfigError("a model file is required (--model)");
  }
  rl::QNetwork net = rl::load_model(c.model, &meta);
  app::check_model(net, meta);
  return net;
}

std::string solution_json(const app::RunConfig &c, const TreeMesh1D &mesh, const fem::DGSolution &u)
{
  nlohmann::json j{{"case", c.case_name}, {"mesh", mesh.to_json()}, {"solution", u.to_json()}};
  return j.dump(1) + "\n";
}

void cmd_train(const app::RunConfig &c)
{
  std::ostringstream log;
  const app::TrainOutput out = app::run_train(c, &log);
  rl::save_model(output(c, "model.json").string(), out.result.best, out.meta);
  rl::save_model(output(c, "model_final.json").string(), out.result.final, out.meta);
  write_text(output(c, "train_log.jsonl"), log.str());
  std::cout << "episodes " << out.result.episodes.size() << ", best eval " << out.result.best_eval.mean << " at step "
            << out.result.best_eval.step << ", final eval " << out.result.final_eval.mean << '\n';
}

void report(const std::vector<app::CycleRow> &rows)
{
  const auto &r = rows.back();
  std::cout << "cycles " << r.cycle << ", cells " << r.cells << ", dofs " << r.dofs << ", l2_error " << r.l2_error
            << '\n';
}

void cmd_deploy(const app::RunConfig &c)
{
  rl::ModelMeta meta;
  const rl::QNetwork net = load(c, meta);
  const app::CycleRun run = app::run_deploy(net, meta, c);
  std::ostringstream csv;
  app::write_cycle_csv(csv, run.rows);
  write_text(output(c, "deploy.csv"), csv.str());
  write_text(output(c, "deploy_solution.json"), solution_json(c, run.mesh, run.u));
  report(run.rows);
}

void cmd_baseline(const app::RunConfig &c)
{
  const app::CycleRun run = app::run_baseline(c);
  std::ostringstream csv;
  app::write_cycle_csv(csv, run.rows);
  write_text(output(c, "baseline.csv"), csv.str());
  write_text(output(c, "baseline_solution.json"), solution_json(c, run.mesh, run.u));
  report(run.rows);
}

void cmd_convergence(const app::RunConfig &c)
{
  const auto rows = app::run_convergence(c);
  std::ostringstream csv;
  app::write_convergence_csv(csv, rows);
  write_text(output(c, "convergence.csv"), csv.str());
  std::cout << "fitted order over the last 3 levels " << app::fitted_order(rows, 3) << '\n';
}

void cmd_unsteady(const app::RunConfig &c, bool heuristic)
{
  app::UnsteadyRun run;
  if (heuristic || c.model.empty())
  {
    run = app::run_unsteady(c);
  }
  else
  {
    rl::ModelMeta meta;
    const rl::QNetwork net = load(c, meta);
    const env::Policy policy = app::policy_for(net, meta, c);
    run = app::run_unsteady(c, &policy);
  }
  std::ostringstream csv;
  app::write_unsteady_csv(csv, run.rows);
  write_text(output(c, "unsteady.csv"), csv.str());
  write_text(output(c, "unsteady_solution.json"), solution_json(c, run.mesh, run.u));
  std::cout << "steps " << run.rows.back().step << ", mean cells " << run.mean_cells() << ", final l2_error "
            << run.rows.back().l2_error << '\n';
}

void cmd_introspect(const app::RunConfig &c)
{
  rl::ModelMeta meta;
  const rl::QNetwork net = load(c, meta);
  std::ostringstream csv;
  app::write_introspect_csv(csv, app::run_introspect(net, meta, c));
  write_text(output(c, "introspect.csv"), csv.str());
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App cli{"Reinforcement-learned adaptive mesh refinement for 1D DG and HDG solvers"};
  cli.require_subcommand(1);
  Overrides o;

  auto *train = cli.add_subcommand("train", "train a DQN refinement policy");
  add_common(train, o);
  train->add_option("--steps", o.steps, "total environment steps");

  auto *deploy = cli.add_subcommand("deploy", "run AMR cycles driven by a trained model");
  add_common(deploy, o);
  deploy->add_option("--model", o.model, "model JSON file");
  deploy->add_option("--gamma-c", o.gamma_c, "cost weight for split-mode models");

  auto *baseline = cli.add_subcommand("baseline", "run AMR cycles driven by an error indicator");
  add_common(baseline, o);
  baseline->add_option("--indicator", o.indicator, "kelly or gradient");
  baseline->add_option("--strategy", o.strategy, "bulk:R:C or fixed:R:C");

  auto *convergence = cli.add_subcommand("convergence", "uniform refinement study");
  add_common(convergence, o);
  convergence->add_option("--levels", o.levels, "number of uniform refinements");

  auto *unsteady = cli.add_subcommand("unsteady", "time-dependent advection with one AMR cycle per step");
  add_common(unsteady, o);
  unsteady->add_option("--model", o.model, "model JSON file; the heuristic is used when absent");
  unsteady->add_flag("--heuristic", o.heuristic, "use the error indicator even if the config names a model");
  unsteady->add_option("--indicator", o.indicator, "kelly or gradient");
  unsteady->add_option("--strategy", o.strategy, "bulk:R:C or fixed:R:C");
  unsteady->add_option("--t-final", o.t_final, "final time");
  unsteady->add_option("--gamma-c", o.gamma_c, "cost weight for split-mode models");

  auto *introspect = cli.add_subcommand("introspect", "action map over (log jump, log mean jump) grids");
  add_common(introspect, o);
  introspect->add_option("--model", o.model, "model JSON file");
  introspect->add_option("--p", o.p, "resource levels")->delimiter(',');
  introspect->add_option("--grid", o.grid, "grid points per axis");
  introspect->add_option("--gamma-c", o.gamma_c, "cost weight for split-mode models");

  try
  {
    cli.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try
  {
    const app::RunConfig c = resolve(o);
    if (train->parsed())
    {
      cmd_train(c);
    }
    else if (deploy->parsed())
    {
      cmd_deploy(c);
    }
    else if (baseline->parsed())
    {
      cmd_baseline(c);
    }
    else if (convergence->parsed())
    {
      cmd_convergence(c);
    }
    else if (unsteady->parsed())
    {
      cmd_unsteady(c, o.heuristic);
    }
    else if (introspect->parsed())
    {
      cmd_introspect(c);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const FormatError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const InvalidFractions &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const Error &e)
  {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
