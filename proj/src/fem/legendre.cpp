// SPDX-License-Identifier: Apache-2.0

#include "drlamr/fem/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace drlamr::fem
{

namespace
{

QuadratureRule compute_gauss_legendre(int n)
{
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k)
    {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
  {
    rule.points[n / 2] = 0.0;
  }
  return rule;
}

std::mutex cache_mutex;

}  // namespace

const QuadratureRule &gauss_legendre(int n_points)
{
  if (n_points < 1)
  {
    throw std::invalid_argument("gauss_legendre: need at least one point");
  }
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(n_points);
  if (it == cache.end())
  {
    it = cache.emplace(n_points, compute_gauss_legendre(n_points)).first;
  }
  return it->second;
}

void legendre_values(int degree, double xi, std::span<double> out)
{
  out[0] = 1.0;
  if (degree >= 1)
  {
    out[1] = xi;
  }
  for (int k = 2; k <= degree; ++k)
  {
    out[k] = ((2.0 * k - 1.0) * xi * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
  }
}

void legendre_values_and_derivatives(int degree, double xi, std::span<double> values,
                                     std::span<double> derivatives)
{
  legendre_values(degree, xi, values);
  derivatives[0] = 0.0;
  if (degree >= 1)
  {
    derivatives[1] = 1.0;
  }
  // P'_k = P'_{k-2} + (2k-1) P_{k-1}
  for (int k = 2; k <= degree; ++k)
  {
    derivatives[k] = derivatives[k - 2] + (2.0 * k - 1.0) * values[k - 1];
  }
}

double legendre(int n, double xi)
{
  double p0 = 1.0, p1 = xi;
  if (n == 0)
  {
    return p0;
  }
  for (int k = 2; k <= n; ++k)
  {
    const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

const BasisTable &basis_table(int degree, int n_points)
{
  static std::map<std::pair<int, int>, BasisTable> cache;
  const QuadratureRule &rule = gauss_legendre(n_points);
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(degree, n_points);
  auto it = cache.find(key);
  if (it == cache.end())
  {
    BasisTable t;
    t.degree = degree;
    t.rule = &rule;
    t.values.resize(static_cast<std::size_t>(n_points) * (degree + 1));
    t.derivatives.resize(t.values.size());
    for (int q = 0; q < n_points; ++q)
    {
      std::span<double> v(t.values.data() + q * (degree + 1), degree + 1);
      std::span<double> d(t.derivatives.data() + q * (degree + 1), degree + 1);
      legendre_values_and_derivatives(degree, rule.points[q], v, d);
    }
    it = cache.emplace(key, std::move(t)).first;
  }
  return it->second;
}

}  // namespace drlamr::fem
