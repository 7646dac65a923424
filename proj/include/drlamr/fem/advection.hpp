// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "drlamr/fem/dg_solution.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::fem
{

using SpaceTimeFunction = std::function<double(double x, double t)>;

// u_t + (c u)_x = f on an interval, u = g_D on the inflow end. The inflow end
// is where c n <= 0, i.e. the left end for c > 0.
struct AdvectionProblem
{
  double c = 1.0;
  SpaceTimeFunction f = [](double, double) { return 0.0; };
  std::function<double(double t)> g_D = [](double) { return 0.0; };
  std::optional<SpaceTimeFunction> exact;
};

// Upwind DG operator on a fixed partition. Encodes the semi-discrete system
//   M du/dt = b(t) - A u
// where M is the (diagonal) modal mass matrix.
class AdvectionOperator
{
public:
  AdvectionOperator(const AdvectionProblem &problem, std::vector<Interval> cells, int p_order);

  const Eigen::SparseMatrix<double> &matrix() const { return A_; }
  Eigen::VectorXd load(double t) const;
  // M^{-1} (b(t) - A u)
  Eigen::VectorXd time_derivative(const Eigen::VectorXd &u, double t) const;

  const std::vector<Interval> &cells() const { return cells_; }
  int p_order() const { return p_; }
  int n_dofs() const { return static_cast<int>(cells_.size()) * (p_ + 1); }

private:
  AdvectionProblem problem_;
  std::vector<Interval> cells_;
  int p_;
  Eigen::SparseMatrix<double> A_;
  Eigen::VectorXd inv_mass_;
};

DGSolution solve_steady_advection(const AdvectionProblem &problem, const std::vector<Interval> &cells, int p_order);
DGSolution solve_steady_advection(const AdvectionProblem &problem, const TreeMesh1D &mesh, int p_order);

// Largest time step accepted by the unsteady stepper on this partition:
// h_min / (|c| (2 p_order + 1)).
double max_stable_dt(double c, double h_min, int p_order);

// One LSERK-45 step of size dt starting at time t. The mesh is unchanged.
DGSolution step_unsteady_advection(const AdvectionProblem &problem, const DGSolution &u, double t, double dt);

// n steps of size dt reusing one assembled operator.
DGSolution advance_unsteady_advection(const AdvectionProblem &problem, const DGSolution &u, double t0, double dt,
                                      int n_steps);

// Published coefficients of the five-stage fourth-order low-storage scheme.
struct Lserk45
{
  static constexpr int kStages = 5;
  static const double a[kStages];
  static const double b[kStages];
  static const double c[kStages];
};

}  // namespace drlamr::fem
