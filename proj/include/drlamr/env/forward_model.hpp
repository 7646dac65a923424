// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>

#include "drlamr/fem/advection.hpp"
#include "drlamr/fem/dg_solution.hpp"
#include "drlamr/fem/poisson_hdg.hpp"
#include "drlamr/indicators/indicators.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::env
{

using fem::DGSolution;

// The map from mesh state to discrete solution, plus whatever time state an
// unsteady problem carries.
class ForwardModel
{
public:
  virtual ~ForwardModel() = default;

  virtual Interval domain() const = 0;
  virtual int p_order() const = 0;

  // M(S): the solution the environment associates with this mesh.
  virtual DGSolution solve(const TreeMesh1D &mesh) = 0;
  // Solution after an AMR cycle, given the solution on the previous mesh.
  virtual DGSolution resolve(const TreeMesh1D &mesh, const DGSolution & /*previous*/) { return solve(mesh); }

  virtual bool is_unsteady() const { return false; }
  virtual void begin_episode(std::mt19937_64 & /*rng*/) {}
  virtual void advance(DGSolution & /*u*/) {}
  virtual double time() const { return 0.0; }

  // Exact solution at the current time, if known.
  virtual std::optional<fem::ScalarFunction> exact() const { return std::nullopt; }
  virtual indicators::KellyOptions kelly_options() const { return {}; }
  // Narrowest admissible cell; unsteady stepping imposes one.
  virtual double min_cell_width() const { return 0.0; }
};

class SteadyAdvectionModel : public ForwardModel
{
public:
  SteadyAdvectionModel(fem::AdvectionProblem problem, Interval domain, int p_order);
  Interval domain() const override { return domain_; }
  int p_order() const override { return p_; }
  DGSolution solve(const TreeMesh1D &mesh) override;
  std::optional<fem::ScalarFunction> exact() const override;

private:
  fem::AdvectionProblem problem_;
  Interval domain_;
  int p_;
};

class PoissonModel : public ForwardModel
{
public:
  PoissonModel(fem::PoissonProblem problem, Interval domain, int p_order);
  Interval domain() const override { return domain_; }
  int p_order() const override { return p_; }
  DGSolution solve(const TreeMesh1D &mesh) override;
  std::optional<fem::ScalarFunction> exact() const override { return problem_.exact; }
  indicators::KellyOptions kelly_options() const override { return {problem_.kappa, problem_.g_N}; }

private:
  fem::PoissonProblem problem_;
  Interval domain_;
  int p_;
};

// Time-dependent advection with fixed dt. Time is tracked as an integer step
// count. In training, solve() projects the exact state at the episode start
// and re-integrates to the current step on the given mesh; resolve() carries
// the previous solution over by transfer.
class UnsteadyAdvectionModel : public ForwardModel
{
public:
  UnsteadyAdvectionModel(fem::AdvectionProblem problem, Interval domain, int p_order, double dt, double t_final);
  Interval domain() const override { return domain_; }
  int p_order() const override { return p_; }
  DGSolution solve(const TreeMesh1D &mesh) override;
  DGSolution resolve(const TreeMesh1D &mesh, const DGSolution &previous) override;
  bool is_unsteady() const override { return true; }
  void begin_episode(std::mt19937_64 &rng) override;
  void advance(DGSolution &u) override;
  double time() const override { return step_ * dt_; }
  std::optional<fem::ScalarFunction> exact() const override;
  double min_cell_width() const override;

  // Puts the clock at step k and marks it as the re-integration origin.
  void set_step(int k);
  int step() const { return step_; }
  double dt() const { return dt_; }
  double t_final() const { return t_final_; }
  int n_steps_total() const;

private:
  fem::AdvectionProblem problem_;
  Interval domain_;
  int p_;
  double dt_;
  double t_final_;
  int origin_ = 0;
  int step_ = 0;
};

}  // namespace drlamr::env
