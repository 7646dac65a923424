// SPDX-License-Identifier: Apache-2.0

#include "drlamr/env/forward_model.hpp"

#include <cmath>

#include "drlamr/error.hpp"
#include "drlamr/fem/legendre.hpp"
#include "drlamr/fem/measures.hpp"

namespace drlamr::env
{

SteadyAdvectionModel::SteadyAdvectionModel(fem::AdvectionProblem problem, Interval domain, int p_order)
    : problem_(std::move(problem)), domain_(domain), p_(p_order)
{
}

DGSolution SteadyAdvectionModel::solve(const TreeMesh1D &mesh) { return fem::solve_steady_advection(problem_, mesh, p_); }

std::optional<fem::ScalarFunction> SteadyAdvectionModel::exact() const
{
  if (!problem_.exact)
  {
    return std::nullopt;
  }
  auto ex = *problem_.exact;
  return [ex](double x) { return ex(x, 0.0); };
}

PoissonModel::PoissonModel(fem::PoissonProblem problem, Interval domain, int p_order)
    : problem_(std::move(problem)), domain_(domain), p_(p_order)
{
}

DGSolution PoissonModel::solve(const TreeMesh1D &mesh) { return fem::solve_poisson_hdg(problem_, mesh, p_); }

UnsteadyAdvectionModel::UnsteadyAdvectionModel(fem::AdvectionProblem problem, Interval domain, int p_order, double dt,
                                               double t_final)
    : problem_(std::move(problem)), domain_(domain), p_(p_order), dt_(dt), t_final_(t_final)
{
  if (!problem_.exact)
  {
    throw ConfigError("unsteady advection needs an exact solution for its initial data");
  }
  if (!(dt > 0.0) || !(t_final >= 0.0))
  {
    throw ConfigError("unsteady advection needs dt > 0 and t_final >= 0");
  }
}

int UnsteadyAdvectionModel::n_steps_total() const { return static_cast<int>(std::lround(t_final_ / dt_)); }

void UnsteadyAdvectionModel::set_step(int k)
{
  origin_ = k;
  step_ = k;
}

void UnsteadyAdvectionModel::begin_episode(std::mt19937_64 &rng)
{
  const int n = std::max(1, n_steps_total());
  set_step(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

DGSolution UnsteadyAdvectionModel::solve(const TreeMesh1D &mesh)
{
  const auto &ex = *problem_.exact;
  const double t0 = origin_ * dt_;
  DGSolution u = fem::project([&](double x) { return ex(x, t0); }, mesh.active_intervals(), p_, fem::load_points(p_));
  if (step_ > origin_)
  {
    u = fem::advance_unsteady_advection(problem_, u, t0, dt_, step_ - origin_);
  }
  return u;
}

DGSolution UnsteadyAdvectionModel::resolve(const TreeMesh1D &mesh, const DGSolution &previous)
{
  return fem::transfer(previous, mesh.active_intervals());
}

void UnsteadyAdvectionModel::advance(DGSolution &u)
{
  u = fem::step_unsteady_advection(problem_, u, time(), dt_);
  ++step_;
}

std::optional<fem::ScalarFunction> UnsteadyAdvectionModel::exact() const
{
  auto ex = *problem_.exact;
  const double t = time();
  return [ex, t](double x) { return ex(x, t); };
}

double UnsteadyAdvectionModel::min_cell_width() const
{
  return dt_ * std::abs(problem_.c) * (2.0 * p_ + 1.0) / (1.0 + 1e-12);
}

}  // namespace drlamr::env
