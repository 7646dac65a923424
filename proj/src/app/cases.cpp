// SPDX-License-Identifier: Apache-2.0

#include "drlamr/app/cases.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "drlamr/error.hpp"

namespace drlamr::app
{

namespace
{

struct Named
{
  CaseKind kind;
  const char *name;
};

constexpr std::array<Named, 5> kNames{{{CaseKind::SteadyAdv1D, "SteadyAdv1D"},
                                       {CaseKind::SteadyAdvGen1D, "SteadyAdvGen1D"},
                                       {CaseKind::UnsteadyAdv1D, "UnsteadyAdv1D"},
                                       {CaseKind::PoissonHDG1D, "PoissonHDG1D"},
                                       {CaseKind::ConstantAdv, "ConstantAdv"}}};

void steady_tanh(ExperimentCase &c)
{
  constexpr double alpha = 10.0;
  c.domain = {0.0, 1.0};
  c.n_initial_cells = 4;
  c.exact = [](double x, double) { return 1.0 - std::tanh(alpha * (1.0 - 4.0 * (x - 0.25))); };
  c.exact_dx = [](double x, double) {
    const double s = 1.0 / std::cosh(alpha * (1.0 - 4.0 * (x - 0.25)));
    return 4.0 * alpha * s * s;
  };
}

void steady_gen(ExperimentCase &c)
{
  const double n = c.params.gen_n;
  c.domain = {-4.0, 4.0};
  c.n_initial_cells = 8;
  c.exact = [n](double x, double) { return std::sin(n * x) * std::exp(-0.5 * x * x); };
  c.exact_dx = [n](double x, double) {
    return (n * std::cos(n * x) - x * std::sin(n * x)) * std::exp(-0.5 * x * x);
  };
}

void unsteady_pulse(ExperimentCase &c)
{
  constexpr double mu = -4.0, sigma2 = 0.25;
  c.domain = {-4.0, 4.0};
  c.n_initial_cells = 8;
  c.exact = [](double x, double t) {
    const double y = x - t - mu;
    return std::exp(-y * y / (2.0 * sigma2));
  };
  c.exact_dx = [](double x, double t) {
    const double y = x - t - mu;
    return -y / sigma2 * std::exp(-y * y / (2.0 * sigma2));
  };
}

constexpr std::array<double, 3> centres{-1.0 / 3.0, 0.0, 1.0 / 3.0};

void poisson_gaussians(ExperimentCase &c)
{
  constexpr double sigma = 0.1;
  const double amp = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  c.domain = {-1.0, 1.0};
  c.n_initial_cells = 4;
  c.velocity = 0.0;
  c.exact = [amp](double x, double) {
    double s = 0.0;
    for (double r : centres)
    {
      s += amp * std::exp(-(x - r) * (x - r) / (sigma * sigma));
    }
    return s;
  };
  c.exact_dx = [amp](double x, double) {
    double s = 0.0;
    for (double r : centres)
    {
      s += -2.0 * (x - r) / (sigma * sigma) * amp * std::exp(-(x - r) * (x - r) / (sigma * sigma));
    }
    return s;
  };
  const double kappa = c.kappa;
  c.forcing = [amp, kappa](double x, double) {
    double uxx = 0.0;
    for (double r : centres)
    {
      const double y = x - r, s2 = sigma * sigma;
      uxx += (4.0 * y * y / (s2 * s2) - 2.0 / s2) * amp * std::exp(-y * y / s2);
    }
    return -kappa * uxx;
  };
}

void constant(ExperimentCase &c)
{
  c.domain = {0.0, 1.0};
  c.n_initial_cells = 4;
  c.default_p = 1;
  c.exact = [](double, double) { return 1.0; };
  c.exact_dx = [](double, double) { return 0.0; };
}

}  // namespace

CaseKind parse_case(const std::string &name)
{
  for (const auto &n : kNames)
  {
    if (name == n.name)
    {
      return n.kind;
    }
  }
  throw ConfigError("unknown case '" + name + "'");
}

std::string to_string(CaseKind kind)
{
  for (const auto &n : kNames)
  {
    if (kind == n.kind)
    {
      return n.name;
    }
  }
  return "?";
}

std::vector<CaseKind> all_cases()
{
  std::vector<CaseKind> out;
  for (const auto &n : kNames)
  {
    out.push_back(n.kind);
  }
  return out;
}

fem::ScalarFunction ExperimentCase::exact_at(double t) const
{
  auto ex = exact;
  return [ex, t](double x) { return ex(x, t); };
}

ExperimentCase make_case(CaseKind kind, const CaseParams &params)
{
  ExperimentCase c;
  c.kind = kind;
  c.params = params;
  switch (kind)
  {
  case CaseKind::SteadyAdv1D:
    steady_tanh(c);
    break;
  case CaseKind::SteadyAdvGen1D:
    steady_gen(c);
    break;
  case CaseKind::UnsteadyAdv1D:
    unsteady_pulse(c);
    break;
  case CaseKind::PoissonHDG1D:
    poisson_gaussians(c);
    break;
  case CaseKind::ConstantAdv:
    constant(c);
    break;
  }
  if (!c.forcing)
  {
    // u_t + c u_x = f; every advected solution here is a function of x - c t.
    const double vel = c.velocity;
    auto dx = c.exact_dx;
    c.forcing = c.unsteady() ? fem::SpaceTimeFunction([](double, double) { return 0.0; })
                             : fem::SpaceTimeFunction([vel, dx](double x, double t) { return vel * dx(x, t); });
  }
  return c;
}

fem::AdvectionProblem advection_problem(const ExperimentCase &c)
{
  if (c.hybridized())
  {
    throw ConfigError(to_string(c.kind) + " is not an advection case");
  }
  fem::AdvectionProblem pb;
  pb.c = c.velocity;
  pb.f = c.forcing;
  auto ex = c.exact;
  const double inlet = c.velocity >= 0.0 ? c.domain.lo : c.domain.hi;
  pb.g_D = [ex, inlet](double t) { return ex(inlet, t); };
  pb.exact = c.exact;
  return pb;
}

fem::PoissonProblem poisson_problem(const ExperimentCase &c)
{
  if (!c.hybridized())
  {
    throw ConfigError(to_string(c.kind) + " is not a Poisson case");
  }
  fem::PoissonProblem pb;
  pb.kappa = c.kappa;
  auto f = c.forcing;
  auto ex = c.exact;
  pb.f = [f](double x) { return f(x, 0.0); };
  pb.g_D = c.exact(c.domain.lo, 0.0);
  pb.g_N = c.exact_dx(c.domain.hi, 0.0);
  pb.exact = [ex](double x) { return ex(x, 0.0); };
  return pb;
}

std::shared_ptr<env::ForwardModel> make_model(const ExperimentCase &c, int p_order)
{
  if (p_order < 0)
  {
    throw ConfigError("p_order must be non-negative");
  }
  if (c.hybridized())
  {
    return std::make_shared<env::PoissonModel>(poisson_problem(c), c.domain, p_order);
  }
  if (c.unsteady())
  {
    return std::make_shared<env::UnsteadyAdvectionModel>(advection_problem(c), c.domain, p_order, c.params.dt,
                                                         c.params.t_final);
  }
  return std::make_shared<env::SteadyAdvectionModel>(advection_problem(c), c.domain, p_order);
}

}  // namespace drlamr::app
