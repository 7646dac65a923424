// SPDX-License-Identifier: Apache-2.0

#include "drlamr/fem/measures.hpp"

#include <algorithm>
#include <cmath>

#include "drlamr/error.hpp"
#include "drlamr/fem/legendre.hpp"

namespace drlamr::fem
{

namespace
{

// First source cell whose right end lies beyond x.
int first_cell_ending_after(const DGSolution &u, double x)
{
  auto it = std::upper_bound(u.cells.begin(), u.cells.end(), x, [](double v, const Interval &c) { return v < c.hi; });
  return static_cast<int>(it - u.cells.begin());
}

}  // namespace

DGSolution transfer(const DGSolution &u, const std::vector<Interval> &target)
{
  if (target.empty() || target.front().lo != u.cells.front().lo || target.back().hi != u.cells.back().hi)
  {
    throw IncompatibleMeshes("transfer: target does not cover the source domain");
  }
  DGSolution out(target, u.p_order);
  const int nm = u.n_modes();
  const BasisTable &tab = basis_table(u.p_order, u.p_order + 1);

  for (int t = 0; t < out.n_cells(); ++t)
  {
    const Interval &tc = target[t];
    const int s0 = first_cell_ending_after(u, tc.lo);
    if (s0 >= u.n_cells() || u.cells[s0].lo > tc.lo)
    {
      throw IncompatibleMeshes("transfer: target cell starts inside no source cell");
    }
    if (u.cells[s0].contains(tc))
    {
      if (u.cells[s0] == tc)
      {
        out.coeffs.row(t) = u.coeffs.row(s0);
        continue;
      }
      // Restriction: re-expand the source polynomial on the sub-interval.
      for (int q = 0; q < tab.rule->size(); ++q)
      {
        const double x = tc.mid() + 0.5 * tc.width() * tab.rule->points[q];
        const double v = u.evaluate_in(s0, x) * tab.rule->weights[q];
        for (int j = 0; j < nm; ++j)
        {
          out.coeffs(t, j) += v * tab.value(q, j);
        }
      }
    }
    else
    {
      if (u.cells[s0].lo != tc.lo)
      {
        throw IncompatibleMeshes("transfer: partitions are not nested");
      }
      // Projection: the target covers whole source cells s0..s1.
      int s = s0;
      for (; s < u.n_cells() && u.cells[s].hi <= tc.hi; ++s)
      {
        const Interval &sc = u.cells[s];
        for (int q = 0; q < tab.rule->size(); ++q)
        {
          const double x = sc.mid() + 0.5 * sc.width() * tab.rule->points[q];
          const double xi_t = 2.0 * (x - tc.mid()) / tc.width();
          const double v = u.evaluate_in(s, x) * tab.rule->weights[q] * sc.width() / tc.width();
          for (int j = 0; j < nm; ++j)
          {
            out.coeffs(t, j) += v * legendre(j, xi_t);
          }
        }
      }
      if (s == s0 || u.cells[s - 1].hi != tc.hi)
      {
        throw IncompatibleMeshes("transfer: partitions are not nested");
      }
    }
    for (int j = 0; j < nm; ++j)
    {
      out.coeffs(t, j) *= (2.0 * j + 1.0) / 2.0;
    }
  }
  return out;
}

InterfaceJumps interface_jumps(const DGSolution &u)
{
  InterfaceJumps j;
  const int n = u.n_cells();
  j.per_cell.assign(n, 0.0);
  for (int k = 0; k + 1 < n; ++k)
  {
    const double jump = std::abs(u.right_trace(k) - u.left_trace(k + 1));
    j.per_cell[k] += jump;
    j.per_cell[k + 1] += jump;
  }
  double s = 0.0;
  for (double v : j.per_cell)
  {
    s += v;
  }
  j.mean = n > 0 ? s / n : 0.0;
  return j;
}

double delta_u(const DGSolution &before, const DGSolution &after)
{
  if (before.p_order != after.p_order)
  {
    throw IncompatibleMeshes("delta_u: polynomial orders differ");
  }
  if (before.domain() != after.domain())
  {
    throw IncompatibleMeshes("delta_u: domains differ");
  }
  // Common refinement of both partitions; for nested meshes this is the finer one.
  std::vector<double> pts;
  pts.reserve(before.cells.size() + after.cells.size() + 2);
  for (const Interval &c : before.cells)
  {
    pts.push_back(c.lo);
  }
  for (const Interval &c : after.cells)
  {
    pts.push_back(c.lo);
  }
  pts.push_back(before.domain().hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const QuadratureRule &rule = gauss_legendre(before.p_order + 3);
  double total = 0.0;
  int kb = 0, ka = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
  {
    const Interval fine{pts[i], pts[i + 1]};
    while (before.cells[kb].hi <= fine.lo)
    {
      ++kb;
    }
    while (after.cells[ka].hi <= fine.lo)
    {
      ++ka;
    }
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q)
    {
      const double x = fine.mid() + 0.5 * fine.width() * rule.points[q];
      s += rule.weights[q] * std::abs(after.evaluate_in(ka, x) - before.evaluate_in(kb, x));
    }
    total += 0.5 * fine.width() * s;
  }
  return total;
}

double l2_error(const DGSolution &u, const std::function<double(double)> &exact)
{
  const QuadratureRule &rule = gauss_legendre(u.p_order + 3);
  double s = 0.0;
  for (int k = 0; k < u.n_cells(); ++k)
  {
    const Interval &c = u.cells[k];
    double sk = 0.0;
    for (int q = 0; q < rule.size(); ++q)
    {
      const double x = c.mid() + 0.5 * c.width() * rule.points[q];
      const double e = u.evaluate_in(k, x) - exact(x);
      sk += rule.weights[q] * e * e;
    }
    s += 0.5 * c.width() * sk;
  }
  return std::sqrt(s);
}

double l2_norm(const DGSolution &u)
{
  // Orthogonality of the modal basis: ||u||^2 = sum_k h/2 sum_j 2/(2j+1) c_kj^2.
  double s = 0.0;
  for (int k = 0; k < u.n_cells(); ++k)
  {
    for (int j = 0; j < u.n_modes(); ++j)
    {
      s += u.cells[k].width() / (2.0 * j + 1.0) * u.coeffs(k, j) * u.coeffs(k, j);
    }
  }
  return std::sqrt(s);
}

int dof_count(const DGSolution &u) { return u.n_cells() * u.n_modes(); }

DofCount hdg_dof_count(const DGSolution &u) { return {dof_count(u), u.n_cells() + 1}; }

}  // namespace drlamr::fem
