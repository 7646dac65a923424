// SPDX-License-Identifier: Apache-2.0

#include "drlamr/fem/advection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

#include "drlamr/error.hpp"
#include "drlamr/fem/legendre.hpp"

namespace drlamr::fem
{

const double Lserk45::a[kStages] = {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
                                    -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0};
const double Lserk45::b[kStages] = {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
                                    1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
                                    2277821191437.0 / 14882151754819.0};
const double Lserk45::c[kStages] = {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
                                    2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0};

namespace
{

// P_j(+-1)
double end_value(int j, bool right) { return (right || j % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

AdvectionOperator::AdvectionOperator(const AdvectionProblem &problem, std::vector<Interval> cells, int p_order)
  : problem_(problem), cells_(std::move(cells)), p_(p_order)
{
  if (p_ < 0)
  {
    throw std::invalid_argument("AdvectionOperator: negative polynomial order");
  }
  const int nm = p_ + 1;
  const int n_cells = static_cast<int>(cells_.size());
  const int n = n_cells * nm;
  const double c = problem_.c;

  // Reference volume term S_ij = int P_i' P_j, exact with p+1 points.
  const BasisTable &tab = basis_table(p_, p_ + 1);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nm, nm);
  for (int q = 0; q < tab.rule->size(); ++q)
  {
    for (int i = 0; i < nm; ++i)
    {
      for (int j = 0; j < nm; ++j)
      {
        S(i, j) += tab.rule->weights[q] * tab.derivative(q, i) * tab.value(q, j);
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_cells) * nm * nm * 3);
  inv_mass_.resize(n);
  for (int k = 0; k < n_cells; ++k)
  {
    const int r0 = k * nm;
    const double h = cells_[k].width();
    for (int i = 0; i < nm; ++i)
    {
      inv_mass_[r0 + i] = (2.0 * i + 1.0) / h;
      for (int j = 0; j < nm; ++j)
      {
        double v = -c * S(i, j);
        // Right face, n = +1. Upwind takes the interior trace when c n >= 0.
        if (c >= 0.0)
        {
          v += c * end_value(i, true) * end_value(j, true);
        }
        // Left face, n = -1, c n = -c.
        if (-c >= 0.0)
        {
          v += -c * end_value(i, false) * end_value(j, false);
        }
        if (v != 0.0)
        {
          trip.emplace_back(r0 + i, r0 + j, v);
        }
      }
      // Exterior upwind contributions from neighbours.
      if (c < 0.0 && k + 1 < n_cells)
      {
        for (int j = 0; j < nm; ++j)
        {
          trip.emplace_back(r0 + i, (k + 1) * nm + j, c * end_value(i, true) * end_value(j, false));
        }
      }
      if (c > 0.0 && k > 0)
      {
        for (int j = 0; j < nm; ++j)
        {
          trip.emplace_back(r0 + i, (k - 1) * nm + j, -c * end_value(i, false) * end_value(j, true));
        }
      }
    }
  }
  A_.resize(n, n);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
}

Eigen::VectorXd AdvectionOperator::load(double t) const
{
  const int nm = p_ + 1;
  const int n_cells = static_cast<int>(cells_.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_cells * nm);
  const BasisTable &tab = basis_table(p_, load_points(p_));
  for (int k = 0; k < n_cells; ++k)
  {
    const Interval &cell = cells_[k];
    for (int q = 0; q < tab.rule->size(); ++q)
    {
      const double x = cell.mid() + 0.5 * cell.width() * tab.rule->points[q];
      const double fw = 0.5 * cell.width() * tab.rule->weights[q] * problem_.f(x, t);
      for (int i = 0; i < nm; ++i)
      {
        b[k * nm + i] += fw * tab.value(q, i);
      }
    }
  }
  const double c = problem_.c;
  if (c > 0.0)
  {
    // -<w, g_D c n> at the left end, n = -1.
    const double g = problem_.g_D(t);
    for (int i = 0; i < nm; ++i)
    {
      b[i] += c * end_value(i, false) * g;
    }
  }
  else if (c < 0.0)
  {
    const double g = problem_.g_D(t);
    const int r0 = (n_cells - 1) * nm;
    for (int i = 0; i < nm; ++i)
    {
      b[r0 + i] -= c * end_value(i, true) * g;
    }
  }
  return b;
}

Eigen::VectorXd AdvectionOperator::time_derivative(const Eigen::VectorXd &u, double t) const
{
  Eigen::VectorXd r = load(t);
  r.noalias() -= A_ * u;
  return r.cwiseProduct(inv_mass_);
}

DGSolution solve_steady_advection(const AdvectionProblem &problem, const std::vector<Interval> &cells, int p_order)
{
  AdvectionOperator op(problem, cells, p_order);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(op.matrix());
  if (lu.info() != Eigen::Success)
  {
    throw SingularSystem("steady advection: factorization failed (" + lu.lastErrorMessage() + ")");
  }
  const Eigen::VectorXd x = lu.solve(op.load(0.0));
  if (lu.info() != Eigen::Success || !x.allFinite())
  {
    throw SingularSystem("steady advection: solve failed");
  }
  DGSolution u(cells, p_order);
  u.coeffs = Eigen::Map<const CoeffMatrix>(x.data(), u.n_cells(), u.n_modes());
  return u;
}

DGSolution solve_steady_advection(const AdvectionProblem &problem, const TreeMesh1D &mesh, int p_order)
{
  return solve_steady_advection(problem, mesh.active_intervals(), p_order);
}

double max_stable_dt(double c, double h_min, int p_order)
{
  if (c == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return h_min / (std::abs(c) * (2.0 * p_order + 1.0));
}

DGSolution advance_unsteady_advection(const AdvectionProblem &problem, const DGSolution &u, double t0, double dt,
                                      int n_steps)
{
  if (!(dt > 0.0))
  {
    throw UnstableStep("unsteady advection: dt must be positive");
  }
  double h_min = std::numeric_limits<double>::infinity();
  for (const Interval &c : u.cells)
  {
    h_min = std::min(h_min, c.width());
  }
  // Small relative slack so a step exactly at the limit is accepted.
  if (dt > max_stable_dt(problem.c, h_min, u.p_order) * (1.0 + 1e-12))
  {
    std::ostringstream msg;
    msg << "unsteady advection: dt = " << dt << " exceeds the stability limit "
        << max_stable_dt(problem.c, h_min, u.p_order) << " for h_min = " << h_min;
    throw UnstableStep(msg.str());
  }
  AdvectionOperator op(problem, u.cells, u.p_order);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(u.coeffs.data(), op.n_dofs());
  Eigen::VectorXd res = Eigen::VectorXd::Zero(op.n_dofs());
  double t = t0;
  for (int s = 0; s < n_steps; ++s)
  {
    for (int k = 0; k < Lserk45::kStages; ++k)
    {
      res = Lserk45::a[k] * res + dt * op.time_derivative(x, t + Lserk45::c[k] * dt);
      x += Lserk45::b[k] * res;
    }
    t = t0 + (s + 1) * dt;
    if (!x.allFinite())
    {
      throw UnstableStep("unsteady advection: solution became non-finite");
    }
  }
  DGSolution out(u.cells, u.p_order);
  out.coeffs = Eigen::Map<const CoeffMatrix>(x.data(), out.n_cells(), out.n_modes());
  return out;
}

DGSolution step_unsteady_advection(const AdvectionProblem &problem, const DGSolution &u, double t, double dt)
{
  return advance_unsteady_advection(problem, u, t, dt, 1);
}

}  // namespace drlamr::fem
