// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "drlamr/mesh/tree_mesh.hpp"

namespace drlamr::fem
{

using CoeffMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Piecewise polynomial of degree p_order in a modal Legendre basis. Row k of
// `coeffs` holds the p_order+1 coefficients on cells[k]; on that cell
//   u(x) = sum_j coeffs(k, j) P_j(xi),  xi = 2 (x - mid) / width.
struct DGSolution
{
  static constexpr int kMaxOrder = 24;

  std::vector<Interval> cells;  // sorted by left endpoint, a partition
  int p_order = 1;
  CoeffMatrix coeffs;

  DGSolution() = default;
  DGSolution(std::vector<Interval> cells_, int p_order_);

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_modes() const { return p_order + 1; }
  Interval domain() const { return {cells.front().lo, cells.back().hi}; }

  // Index of the cell owning x. Points on an interior endpoint belong to the
  // cell on their right, except the domain's right end.
  int locate(double x) const;

  double evaluate_in(int cell, double x) const;
  double derivative_in(int cell, double x) const;
  double evaluate(double x) const { return evaluate_in(locate(x), x); }

  // Traces at the cell's left (xi = -1) and right (xi = +1) endpoints.
  double left_trace(int cell) const;
  double right_trace(int cell) const;

  nlohmann::json to_json() const;
  static DGSolution from_json(const nlohmann::json &j);
};

using ScalarFunction = std::function<double(double)>;

// Cellwise L2 projection using `n_points` Gauss points per cell.
DGSolution project(const ScalarFunction &f, std::vector<Interval> cells, int p_order, int n_points);

}  // namespace drlamr::fem
