// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "drlamr/fem/measures.hpp"

namespace drlamr::env
{

enum class Action : int
{
  Coarsen = 0,
  DoNothing = 1,
  Refine = 2
};
inline constexpr int kNumActions = 3;

std::string to_string(Action a);

enum class BarrierKind
{
  Sqrt,
  Polynomial,
  Hortative
};

BarrierKind parse_barrier(const std::string &name);
std::string to_string(BarrierKind kind);

// Machine epsilon used as the floor inside every log10.
inline constexpr double kEps = 1e-16;

// Resource barrier B(p); +infinity for p >= 1.
double barrier(double p, BarrierKind kind);

struct RewardBreakdown
{
  double r_total = 0.0;
  double r_delta_u = 0.0;  // signed accuracy term
  double r_cost = 0.0;     // gamma_c (B(p_after) - B(p_before))
  double delta_u_raw = 0.0;
  double p_before = 0.0;
  double p_after = 0.0;
};

RewardBreakdown reward(Action action, double delta_u, double p_before, double p_after, double gamma_c,
                       BarrierKind kind);

using Observation = std::vector<double>;
inline constexpr int kBaseObsDim = 5;
inline constexpr int kObsResourceIndex = 4;

// [log Xi_self, log Xi_left, log Xi_right, log mean Xi, p] ++ extra. A missing
// neighbour repeats the cell's own entry.
Observation observe(const fem::InterfaceJumps &jumps, int position, double p,
                    const std::vector<double> &extra = {});

}  // namespace drlamr::env
