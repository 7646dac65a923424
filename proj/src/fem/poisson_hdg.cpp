// SPDX-License-Identifier: Apache-2.0

#include "drlamr/fem/poisson_hdg.hpp"

#include <Eigen/SparseLU>

#include "drlamr/error.hpp"
#include "drlamr/fem/legendre.hpp"

namespace drlamr::fem
{

namespace
{

double end_value(int j, bool right) { return (right || j % 2 == 0) ? 1.0 : -1.0; }

// Element-local pieces of the hybridized system. With z = [q; u] and the two
// traces uhat = [left, right]:
//   K z + G uhat = F          (local solver)
//   flux = C z + D uhat       (outward numerical fluxes at left, right)
struct LocalSystem
{
  Eigen::MatrixXd K, G, C;
  Eigen::VectorXd F;
  Eigen::Matrix2d D;
};

LocalSystem local_system(const PoissonProblem &pb, const Interval &cell, int p, const Eigen::MatrixXd &S)
{
  const int nm = p + 1;
  const double h = cell.width();
  const double tau = pb.tau();
  LocalSystem L;
  L.K = Eigen::MatrixXd::Zero(2 * nm, 2 * nm);
  L.G = Eigen::MatrixXd::Zero(2 * nm, 2);
  L.C = Eigen::MatrixXd::Zero(2, 2 * nm);
  L.F = Eigen::VectorXd::Zero(2 * nm);
  L.D = Eigen::Matrix2d::Identity() * -tau;

  for (int i = 0; i < nm; ++i)
  {
    const double li = end_value(i, false), ri = end_value(i, true);
    // (v, q/kappa) - (v', u) + <v n, uhat> = 0
    L.K(i, i) = 0.5 * h / pb.kappa * 2.0 / (2.0 * i + 1.0);
    for (int j = 0; j < nm; ++j)
    {
      L.K(i, nm + j) = -S(i, j);
    }
    L.G(i, 0) = -li;
    L.G(i, 1) = ri;
    // (w, q') + <w, tau (u - uhat)> = (w, f)
    for (int j = 0; j < nm; ++j)
    {
      L.K(nm + i, j) = S(j, i);
      L.K(nm + i, nm + j) = tau * (ri * end_value(j, true) + li * end_value(j, false));
    }
    L.G(nm + i, 0) = -tau * li;
    L.G(nm + i, 1) = -tau * ri;
  }
  for (int j = 0; j < nm; ++j)
  {
    L.C(0, j) = -end_value(j, false);
    L.C(0, nm + j) = tau * end_value(j, false);
    L.C(1, j) = end_value(j, true);
    L.C(1, nm + j) = tau * end_value(j, true);
  }

  const BasisTable &tab = basis_table(p, load_points(p));
  for (int q = 0; q < tab.rule->size(); ++q)
  {
    const double x = cell.mid() + 0.5 * h * tab.rule->points[q];
    const double fw = 0.5 * h * tab.rule->weights[q] * pb.f(x);
    for (int i = 0; i < nm; ++i)
    {
      L.F[nm + i] += fw * tab.value(q, i);
    }
  }
  return L;
}

}  // namespace

HdgSolution solve_poisson_hdg_full(const PoissonProblem &problem, const std::vector<Interval> &cells, int p_order)
{
  if (!(problem.tau() > 0.0))
  {
    throw std::invalid_argument("solve_poisson_hdg: stabilization must be positive");
  }
  const int nm = p_order + 1;
  const int n_cells = static_cast<int>(cells.size());
  const int n_traces = n_cells + 1;

  const BasisTable &tab = basis_table(p_order, p_order + 1);
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

  std::vector<LocalSystem> locals;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> factors;
  locals.reserve(n_cells);
  factors.reserve(n_cells);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_traces);

  for (int k = 0; k < n_cells; ++k)
  {
    locals.push_back(local_system(problem, cells[k], p_order, S));
    const LocalSystem &L = locals.back();
    factors.emplace_back(L.K);
    const Eigen::MatrixXd KinvG = factors.back().solve(L.G);
    const Eigen::VectorXd KinvF = factors.back().solve(L.F);
    const Eigen::Matrix2d schur = L.D - L.C * KinvG;
    const Eigen::Vector2d load = -L.C * KinvF;
    for (int a = 0; a < 2; ++a)
    {
      for (int b = 0; b < 2; ++b)
      {
        trip.emplace_back(k + a, k + b, schur(a, b));
      }
      rhs[k + a] += load[a];
    }
  }
  // Neumann: outward numerical flux of q = -kappa u' equals -kappa g_N.
  rhs[n_traces - 1] += -problem.kappa * problem.g_N;

  Eigen::SparseMatrix<double> A(n_traces, n_traces);
  A.setFromTriplets(trip.begin(), trip.end());
  // Strong Dirichlet on the first trace.
  A.prune([](Eigen::Index row, Eigen::Index, double) { return row != 0; });
  A.coeffRef(0, 0) = 1.0;
  rhs[0] = problem.g_D;
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
  {
    throw SingularSystem("poisson hdg: trace factorization failed (" + lu.lastErrorMessage() + ")");
  }
  const Eigen::VectorXd uhat = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !uhat.allFinite())
  {
    throw SingularSystem("poisson hdg: trace solve failed");
  }

  HdgSolution out{DGSolution(cells, p_order), DGSolution(cells, p_order), {}};
  out.traces.assign(uhat.data(), uhat.data() + n_traces);
  for (int k = 0; k < n_cells; ++k)
  {
    const Eigen::Vector2d lam(uhat[k], uhat[k + 1]);
    const Eigen::VectorXd z = factors[k].solve(locals[k].F - locals[k].G * lam);
    for (int j = 0; j < nm; ++j)
    {
      out.q.coeffs(k, j) = z[j];
      out.u.coeffs(k, j) = z[nm + j];
    }
  }
  return out;
}

DGSolution solve_poisson_hdg(const PoissonProblem &problem, const std::vector<Interval> &cells, int p_order)
{
  return solve_poisson_hdg_full(problem, cells, p_order).u;
}

DGSolution solve_poisson_hdg(const PoissonProblem &problem, const TreeMesh1D &mesh, int p_order)
{
  return solve_poisson_hdg(problem, mesh.active_intervals(), p_order);
}

}  // namespace drlamr::fem
