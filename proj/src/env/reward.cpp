// SPDX-License-Identifier: Apache-2.0

#include "drlamr/env/reward.hpp"

#include <cmath>
#include <limits>

#include "drlamr/error.hpp"

namespace drlamr::env
{

std::string to_string(Action a)
{
  switch (a)
  {
  case Action::Coarsen:
    return "coarsen";
  case Action::DoNothing:
    return "nothing";
  case Action::Refine:
    return "refine";
  }
  return "?";
}

BarrierKind parse_barrier(const std::string &name)
{
  if (name == "sqrt")
  {
    return BarrierKind::Sqrt;
  }
  if (name == "polynomial")
  {
    return BarrierKind::Polynomial;
  }
  if (name == "hortative")
  {
    return BarrierKind::Hortative;
  }
  throw ConfigError("unknown barrier '" + name + "' (expected sqrt, polynomial or hortative)");
}

std::string to_string(BarrierKind kind)
{
  switch (kind)
  {
  case BarrierKind::Sqrt:
    return "sqrt";
  case BarrierKind::Polynomial:
    return "polynomial";
  case BarrierKind::Hortative:
    return "hortative";
  }
  return "?";
}

double barrier(double p, BarrierKind kind)
{
  if (kind == BarrierKind::Hortative && !(p > 0.0))
  {
    throw DomainError("hortative barrier needs p > 0");
  }
  if (std::isnan(p) || p < 0.0)
  {
    throw DomainError("barrier needs p >= 0");
  }
  if (p >= 1.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  switch (kind)
  {
  case BarrierKind::Sqrt:
    return std::sqrt(p) / (1.0 - p);
  case BarrierKind::Polynomial:
    return p / (1.0 - p);
  case BarrierKind::Hortative:
    return p / (1.0 - p) - (1.0 / std::sqrt(p) - 1.0);
  }
  return 0.0;
}

RewardBreakdown reward(Action action, double delta_u, double p_before, double p_after, double gamma_c,
                       BarrierKind kind)
{
  RewardBreakdown r;
  r.delta_u_raw = delta_u;
  r.p_before = p_before;
  r.p_after = p_after;
  if (action == Action::DoNothing)
  {
    return r;
  }
  const double magnitude = std::log10(delta_u + kEps) - std::log10(kEps);
  r.r_delta_u = action == Action::Refine ? magnitude : -magnitude;
  r.r_cost = gamma_c == 0.0 ? 0.0 : gamma_c * (barrier(p_after, kind) - barrier(p_before, kind));
  r.r_total = r.r_delta_u - r.r_cost;
  return r;
}

Observation observe(const fem::InterfaceJumps &jumps, int position, double p, const std::vector<double> &extra)
{
  const int n = static_cast<int>(jumps.per_cell.size());
  auto lg = [](double v) { return std::log10(v + kEps); };
  const double self = jumps.per_cell.at(position);
  const double left = position > 0 ? jumps.per_cell[position - 1] : self;
  const double right = position + 1 < n ? jumps.per_cell[position + 1] : self;
  Observation o{lg(self), lg(left), lg(right), lg(jumps.mean), p};
  o.insert(o.end(), extra.begin(), extra.end());
  return o;
}

}  // namespace drlamr::env
