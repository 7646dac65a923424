// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace drlamr::fem
{

// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n-1.
struct QuadratureRule
{
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// Rules are computed once per size and cached; the returned reference stays
// valid for the lifetime of the program.
const QuadratureRule &gauss_legendre(int n_points);

// Values P_0(xi) .. P_degree(xi) written to `out` (size degree+1).
void legendre_values(int degree, double xi, std::span<double> out);

// Values and first derivatives.
void legendre_values_and_derivatives(int degree, double xi, std::span<double> values,
                                     std::span<double> derivatives);

double legendre(int n, double xi);

// Tabulated basis at the points of a quadrature rule, row q holds P_j(xi_q).
struct BasisTable
{
  int degree = 0;
  const QuadratureRule *rule = nullptr;
  std::vector<double> values;       // [q * (degree+1) + j]
  std::vector<double> derivatives;  // same layout

  double value(int q, int j) const { return values[q * (degree + 1) + j]; }
  double derivative(int q, int j) const { return derivatives[q * (degree + 1) + j]; }
};

const BasisTable &basis_table(int degree, int n_points);

// Gauss points for right-hand-side loads; forcing terms are not polynomial.
inline int load_points(int degree) { return degree + 8; }

}  // namespace drlamr::fem
