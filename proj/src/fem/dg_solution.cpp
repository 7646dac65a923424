// SPDX-License-Identifier: Apache-2.0

#include "drlamr/fem/dg_solution.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "drlamr/fem/legendre.hpp"

namespace drlamr::fem
{

DGSolution::DGSolution(std::vector<Interval> cells_, int p_order_)
  : cells(std::move(cells_)), p_order(p_order_), coeffs(CoeffMatrix::Zero(static_cast<Eigen::Index>(cells.size()), p_order_ + 1))
{
  if (p_order < 0 || p_order > kMaxOrder)
  {
    throw std::invalid_argument("DGSolution: polynomial order out of range");
  }
}

int DGSolution::locate(double x) const
{
  auto it = std::upper_bound(cells.begin(), cells.end(), x, [](double v, const Interval &c) { return v < c.lo; });
  int k = static_cast<int>(it - cells.begin()) - 1;
  return std::clamp(k, 0, n_cells() - 1);
}

double DGSolution::evaluate_in(int cell, double x) const
{
  const Interval &c = cells[cell];
  const double xi = 2.0 * (x - c.mid()) / c.width();
  std::array<double, kMaxOrder + 1> vals;
  legendre_values(p_order, xi, vals);
  double s = 0.0;
  for (int j = 0; j <= p_order; ++j)
  {
    s += coeffs(cell, j) * vals[j];
  }
  return s;
}

double DGSolution::derivative_in(int cell, double x) const
{
  const Interval &c = cells[cell];
  const double xi = 2.0 * (x - c.mid()) / c.width();
  std::array<double, kMaxOrder + 1> vals, ders;
  legendre_values_and_derivatives(p_order, xi, vals, ders);
  double s = 0.0;
  for (int j = 0; j <= p_order; ++j)
  {
    s += coeffs(cell, j) * ders[j];
  }
  return s * 2.0 / c.width();
}

double DGSolution::left_trace(int cell) const
{
  double s = 0.0;
  double sign = 1.0;
  for (int j = 0; j <= p_order; ++j, sign = -sign)
  {
    s += sign * coeffs(cell, j);
  }
  return s;
}

double DGSolution::right_trace(int cell) const
{
  return coeffs.row(cell).sum();
}

nlohmann::json DGSolution::to_json() const
{
  nlohmann::json j;
  j["p_order"] = p_order;
  nlohmann::json cs = nlohmann::json::array();
  nlohmann::json co = nlohmann::json::array();
  for (int k = 0; k < n_cells(); ++k)
  {
    cs.push_back({cells[k].lo, cells[k].hi});
    std::vector<double> row(coeffs.row(k).data(), coeffs.row(k).data() + n_modes());
    co.push_back(row);
  }
  j["cells"] = cs;
  j["coeffs"] = co;
  return j;
}

DGSolution DGSolution::from_json(const nlohmann::json &j)
{
  std::vector<Interval> cells;
  for (const auto &c : j.at("cells"))
  {
    cells.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
  }
  DGSolution u(std::move(cells), j.at("p_order").get<int>());
  const auto &co = j.at("coeffs");
  if (co.size() != static_cast<std::size_t>(u.n_cells()))
  {
    throw std::invalid_argument("DGSolution::from_json: coefficient rows do not match cells");
  }
  for (int k = 0; k < u.n_cells(); ++k)
  {
    if (co[k].size() != static_cast<std::size_t>(u.n_modes()))
    {
      throw std::invalid_argument("DGSolution::from_json: wrong number of modes");
    }
    for (int m = 0; m < u.n_modes(); ++m)
    {
      u.coeffs(k, m) = co[k][m].get<double>();
    }
  }
  return u;
}

DGSolution project(const ScalarFunction &f, std::vector<Interval> cells, int p_order, int n_points)
{
  DGSolution u(std::move(cells), p_order);
  const BasisTable &tab = basis_table(p_order, n_points);
  for (int k = 0; k < u.n_cells(); ++k)
  {
    const Interval &c = u.cells[k];
    for (int q = 0; q < n_points; ++q)
    {
      const double x = c.mid() + 0.5 * c.width() * tab.rule->points[q];
      const double fw = f(x) * tab.rule->weights[q];
      for (int j = 0; j <= p_order; ++j)
      {
        u.coeffs(k, j) += fw * tab.value(q, j);
      }
    }
    for (int j = 0; j <= p_order; ++j)
    {
      u.coeffs(k, j) *= (2.0 * j + 1.0) / 2.0;
    }
  }
  return u;
}

}  // namespace drlamr::fem
