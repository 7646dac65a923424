// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "drlamr/fem/dg_solution.hpp"

namespace drlamr::fem
{

// Moves u onto `target`. Each target cell must either lie inside one source
// cell (exact polynomial restriction) or be a union of whole source cells
// (L2 projection). Anything else throws IncompatibleMeshes.
DGSolution transfer(const DGSolution &u, const std::vector<Interval> &target);

struct InterfaceJumps
{
  std::vector<double> per_cell;  // Xi_K
  double mean = 0.0;
};

// Xi_K = sum over interior endpoints of K of |u^- - u^+|.
InterfaceJumps interface_jumps(const DGSolution &u);

// sum_K int_K |after - before| on the common refinement of both partitions,
// with p_order+3 Gauss points per fine cell.
double delta_u(const DGSolution &before, const DGSolution &after);

// ||u - exact||_{L2} with p_order+3 Gauss points per cell.
double l2_error(const DGSolution &u, const std::function<double(double)> &exact);

double l2_norm(const DGSolution &u);

struct DofCount
{
  int element = 0;
  int trace = 0;  // only for hybridized discretizations
  int total() const { return element + trace; }
};

int dof_count(const DGSolution &u);
DofCount hdg_dof_count(const DGSolution &u);

}  // namespace drlamr::fem
