// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "drlamr/fem/dg_solution.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::fem
{

// -kappa u'' = f with u = g_D at the left end and kappa du/dn = kappa g_N at
// the right end (n = +1). g_N is the outward normal derivative of u.
struct PoissonProblem
{
  double kappa = 1.0;
  std::function<double(double)> f = [](double) { return 0.0; };
  double g_D = 0.0;
  double g_N = 0.0;
  double length_scale = 0.2;  // tau = kappa / length_scale (c = 0)
  std::optional<std::function<double(double)>> exact;

  double tau() const { return kappa / length_scale; }
};

struct HdgSolution
{
  DGSolution u;
  DGSolution q;                // q = -kappa u'
  std::vector<double> traces;  // u-hat at the n_cells+1 interface points
};

// Hybridized solve: element unknowns (q, u) are condensed onto the interface
// traces, the trace system is solved directly, and the element fields are
// recovered locally.
HdgSolution solve_poisson_hdg_full(const PoissonProblem &problem, const std::vector<Interval> &cells, int p_order);
DGSolution solve_poisson_hdg(const PoissonProblem &problem, const std::vector<Interval> &cells, int p_order);
DGSolution solve_poisson_hdg(const PoissonProblem &problem, const TreeMesh1D &mesh, int p_order);

}  // namespace drlamr::fem
