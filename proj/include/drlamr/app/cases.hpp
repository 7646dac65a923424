// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "drlamr/env/forward_model.hpp"
#include "drlamr/fem/advection.hpp"
#include "drlamr/fem/poisson_hdg.hpp"

namespace drlamr::app
{

enum class CaseKind
{
  SteadyAdv1D,
  SteadyAdvGen1D,
  UnsteadyAdv1D,
  PoissonHDG1D,
  ConstantAdv
};

CaseKind parse_case(const std::string &name);
std::string to_string(CaseKind kind);
std::vector<CaseKind> all_cases();

struct CaseParams
{
  int gen_n = 2;  // frequency of sin(n x) in SteadyAdvGen1D
  double dt = 0.01;
  double t_final = 7.0;
};

// Manufactured problem: exact solution, its x-derivative and the forcing
// that makes it exact. Steady cases ignore t.
struct ExperimentCase
{
  CaseKind kind = CaseKind::SteadyAdv1D;
  Interval domain;
  int default_p = 3;
  int n_initial_cells = 4;
  double velocity = 1.0;  // advection cases
  double kappa = 1.0;     // Poisson
  CaseParams params;
  fem::SpaceTimeFunction exact;
  fem::SpaceTimeFunction exact_dx;
  fem::SpaceTimeFunction forcing;

  bool unsteady() const { return kind == CaseKind::UnsteadyAdv1D; }
  bool hybridized() const { return kind == CaseKind::PoissonHDG1D; }
  fem::ScalarFunction exact_at(double t) const;
};

ExperimentCase make_case(CaseKind kind, const CaseParams &params = {});

fem::AdvectionProblem advection_problem(const ExperimentCase &c);
fem::PoissonProblem poisson_problem(const ExperimentCase &c);

std::shared_ptr<env::ForwardModel> make_model(const ExperimentCase &c, int p_order);

}  // namespace drlamr::app
