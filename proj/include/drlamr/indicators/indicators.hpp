// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "drlamr/fem/dg_solution.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::indicators
{

using fem::DGSolution;

enum class IndicatorKind
{
  Kelly,
  GradientBased
};

IndicatorKind parse_indicator(const std::string &name);
std::string to_string(IndicatorKind kind);

struct KellyOptions
{
  double a = 1.0;                 // kappa for Poisson, 1 for advection
  std::optional<double> g_N;      // Neumann datum at the right end, if any
};

// eta_K, with c_F = n_F = h_K / 24. Interior face terms count in full for
// both neighbours.
std::vector<double> kelly_indicator(const DGSolution &u, const KellyOptions &opts = {});

// h_K^{3/2} |least-squares gradient from cell-midpoint differences|.
std::vector<double> gradient_indicator(const DGSolution &u);

struct MarkingStrategy
{
  enum class Kind
  {
    Bulk,
    FixedFraction
  };
  Kind kind = Kind::Bulk;
  double refine_frac = 0.0;
  double coarsen_frac = 0.0;

  // "bulk:0.5:0.5" or "fixed:0.4:0.6"
  static MarkingStrategy parse(const std::string &s);
  std::string to_string() const;
  void validate() const;
};

struct Marking
{
  std::vector<int> refine;   // positions into the score vector
  std::vector<int> coarsen;
};

// Ties are broken by `keys` ascending (position when empty).
Marking mark(const std::vector<double> &scores, const MarkingStrategy &strategy,
             const std::vector<std::uint64_t> &keys = {});

struct HeuristicOptions
{
  std::optional<int> max_refinement_depth;
  double min_cell_width = 0.0;  // refinements producing narrower cells are skipped
};

using IndicatorFn = std::function<std::vector<double>(const DGSolution &)>;
// Solution on `mesh`, given the solution on the previous mesh.
using SolveFn = std::function<DGSolution(const TreeMesh1D &mesh, const DGSolution &previous)>;

struct CycleOutcome
{
  DGSolution u;
  int n_refine = 0;
  int n_coarsen = 0;
  int n_nothing = 0;
};

// ESTIMATE -> MARK -> coarsen/refine `mesh` in place -> SOLVE.
CycleOutcome heuristic_cycle(TreeMesh1D &mesh, const DGSolution &u, const IndicatorFn &indicator,
                             const MarkingStrategy &strategy, const SolveFn &solve,
                             const HeuristicOptions &opts = {});

}  // namespace drlamr::indicators
