// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "drlamr/env/amr_env.hpp"
#include "drlamr/error.hpp"

using namespace drlamr;
using namespace drlamr::env;

namespace
{

double tanh_step(double x) { return 1.0 - std::tanh(10.0 * (1.0 - 4.0 * (x - 0.25))); }

std::shared_ptr<ForwardModel> tanh_model()
{
  fem::AdvectionProblem pb;
  pb.c = 1.0;
  pb.f = [](double x, double) {
    const double s = 1.0 / std::cosh(10.0 * (1.0 - 4.0 * (x - 0.25)));
    return 40.0 * s * s;
  };
  pb.g_D = [](double) { return tanh_step(0.0); };
  pb.exact = [](double x, double) { return tanh_step(x); };
  return std::make_shared<SteadyAdvectionModel>(pb, Interval{0.0, 1.0}, 3);
}

std::shared_ptr<UnsteadyAdvectionModel> pulse_model()
{
  auto u0 = [](double x) { return std::exp(-(x + 4.0) * (x + 4.0) / 0.5); };
  fem::AdvectionProblem pb;
  pb.c = 1.0;
  pb.g_D = [=](double t) { return u0(-4.0 - t); };
  pb.exact = [=](double x, double t) { return u0(x - t); };
  return std::make_shared<UnsteadyAdvectionModel>(pb, Interval{-4.0, 4.0}, 3, 0.01, 7.0);
}

}  // namespace

TEST_CASE("barrier closed forms")
{
  for (double p : {0.0, 0.25, 0.5, 0.9})
  {
    CHECK(barrier(p, BarrierKind::Sqrt) == doctest::Approx(std::sqrt(p) / (1 - p)));
    CHECK(barrier(p, BarrierKind::Polynomial) == doctest::Approx(p / (1 - p)));
    if (p > 0)
    {
      CHECK(barrier(p, BarrierKind::Hortative) == doctest::Approx(p / (1 - p) - (1 / std::sqrt(p) - 1)));
    }
  }
  CHECK(barrier(0.0, BarrierKind::Sqrt) == 0.0);
  CHECK(barrier(0.5, BarrierKind::Sqrt) == doctest::Approx(1.41421356));
  CHECK(barrier(0.25, BarrierKind::Hortative) == doctest::Approx(-2.0 / 3.0));
  CHECK(barrier(1.0, BarrierKind::Sqrt) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(barrier(0.0, BarrierKind::Hortative), DomainError);
  CHECK(parse_barrier("hortative") == BarrierKind::Hortative);
  CHECK_THROWS_AS(parse_barrier("log"), ConfigError);
}

TEST_CASE("reward cases")
{
  CHECK(reward(Action::DoNothing, 0.3, 0.2, 0.2, 25, BarrierKind::Sqrt).r_total == 0.0);

  const auto r0 = reward(Action::Refine, 0.0, 0.2, 0.24, 25, BarrierKind::Sqrt);
  CHECK(r0.r_delta_u == 0.0);
  CHECK(r0.r_total == doctest::Approx(-25 * (barrier(0.24, BarrierKind::Sqrt) - barrier(0.2, BarrierKind::Sqrt))));
  CHECK(r0.r_total < 0.0);

  CHECK(reward(Action::Refine, 1.0, 0.2, 0.24, 0, BarrierKind::Sqrt).r_total == doctest::Approx(16.0));
  CHECK(reward(Action::Coarsen, 1.0, 0.24, 0.2, 0, BarrierKind::Sqrt).r_total == doctest::Approx(-16.0));

  // Monotone nonincreasing in p_after.
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 100; ++i)
  {
    const double r = reward(Action::Refine, 0.01, 0.3, i / 100.0, 25, BarrierKind::Hortative).r_total;
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("refine and inverse coarsen have opposite accuracy terms")
{
  auto model = tanh_model();
  TreeMesh1D mesh({0, 1}, 4, 25);
  for (int pos = 0; pos < 4; ++pos)
  {
    TreeMesh1D m = mesh;
    const auto u0 = model->solve(m);
    const double p0 = m.resource_fraction();
    const auto kids = m.refine(m.active_ids()[pos]);
    const auto u1 = model->solve(m);
    const double p1 = m.resource_fraction();
    const auto fwd = reward(Action::Refine, fem::delta_u(u0, u1), p0, p1, 25, BarrierKind::Sqrt);
    m.coarsen(kids[0]);
    const auto u2 = model->solve(m);
    const auto inv = reward(Action::Coarsen, fem::delta_u(u1, u2), p1, p0, 25, BarrierKind::Sqrt);
    CHECK(std::abs(fwd.r_delta_u + inv.r_delta_u) <= 1e-12);
    CHECK(std::abs(fwd.r_cost + inv.r_cost) <= 1e-12);
    CHECK(fwd.r_delta_u > 0.0);
  }
}

TEST_CASE("observations")
{
  fem::InterfaceJumps zero{{0, 0, 0}, 0};
  const auto o = observe(zero, 1, 0.16);
  for (int i = 0; i < 4; ++i)
  {
    CHECK(o[i] == doctest::Approx(-16.0));
  }
  CHECK(o[kObsResourceIndex] == doctest::Approx(0.16));

  fem::InterfaceJumps same{{0.3, 0.3, 0.3}, 0.3};
  const auto so = observe(same, 0, 0.5);
  for (int i = 0; i < 4; ++i)
  {
    CHECK(so[i] == doctest::Approx(std::log10(0.3 + kEps)));
  }

  fem::InterfaceJumps j{{0.2, 0.6, 0.4}, 0.4};
  const auto e = observe(j, 2, 0.3, {7.0});
  CHECK(e.size() == 6);
  CHECK(e[1] == doctest::Approx(std::log10(0.6)));
  CHECK(e[2] == e[0]);
  CHECK(e[5] == 7.0);
}

TEST_CASE("environment dynamics")
{
  EnvConfig cfg;
  cfg.max_cells = 25;
  AmrEnv env(tanh_model(), cfg, 1);

  SUBCASE("coarse reset")
  {
    const auto o = env.reset();
    CHECK(env.mesh().active_count() == 4);
    CHECK(o[kObsResourceIndex] == doctest::Approx(0.16));
  }

  SUBCASE("do nothing leaves the state alone")
  {
    env.reset();
    const auto cells = env.mesh().active_intervals();
    const auto coeffs = env.solution().coeffs;
    const auto r = env.step(Action::DoNothing);
    CHECK(r.reward.r_total == 0.0);
    CHECK(env.mesh().active_intervals() == cells);
    CHECK(env.solution().coeffs == coeffs);
  }

  SUBCASE("infeasible coarsen falls back to nothing")
  {
    env.reset();
    const auto r = env.step(Action::Coarsen);
    CHECK(r.executed == Action::DoNothing);
    CHECK(r.reward.r_total == 0.0);
    CHECK(env.mesh().active_count() == 4);
  }

  SUBCASE("refine re-solves and rewards accuracy change")
  {
    env.mutable_config().gamma_c = 0.0;
    env.reset();
    const auto r = env.step(Action::Refine);
    CHECK(env.mesh().active_count() == 5);
    CHECK(r.reward.delta_u_raw > 0.0);
    CHECK(r.reward.r_total == doctest::Approx(std::log10(r.reward.delta_u_raw + kEps) + 16.0));
  }

  SUBCASE("overrun ends the episode with the penalty")
  {
    env.mutable_config().max_cells = 5;
    env.reset();
    const auto r = env.step(Action::Refine);
    CHECK(r.done);
    CHECK(r.terminal);
    CHECK(r.reason == DoneReason::Overrun);
    CHECK(r.reward.r_total == -1000.0);
  }

  SUBCASE("episode length")
  {
    env.mutable_config().do_nothing_patience = 0;
    env.reset();
    StepResult r;
    for (int i = 0; i < 200; ++i)
    {
      CHECK(!r.done);
      r = env.step(i % 2 ? Action::Coarsen : Action::DoNothing);
    }
    CHECK(r.done);
    CHECK(!r.terminal);
    CHECK(r.reason == DoneReason::EpisodeLength);
  }

  SUBCASE("do-nothing patience")
  {
    env.reset();
    StepResult r;
    for (int i = 0; i < 10; ++i)
    {
      r = env.step(Action::DoNothing);
    }
    CHECK(r.done);
    CHECK(r.reason == DoneReason::Patience);
  }
}

TEST_CASE("random initialisation is seeded and capped")
{
  EnvConfig cfg;
  cfg.init = InitMode::Random;
  cfg.max_cells = 12;
  cfg.random_init_kmax = 40;
  for (std::uint64_t seed = 0; seed < 30; ++seed)
  {
    AmrEnv a(tanh_model(), cfg), b(tanh_model(), cfg);
    const auto oa = a.reset(seed);
    const auto ob = b.reset(seed);
    CHECK(oa == ob);
    CHECK(a.mesh().active_intervals() == b.mesh().active_intervals());
    CHECK(a.mesh().resource_fraction() <= 0.9 + 1e-12);
  }
}

TEST_CASE("trajectories are deterministic")
{
  EnvConfig cfg;
  cfg.init = InitMode::Random;
  auto run = [&] {
    AmrEnv env(tanh_model(), cfg);
    std::ostringstream trace;
    env.set_trace(&trace);
    env.reset(99);
    std::mt19937_64 pick(5);
    for (int i = 0; i < 60; ++i)
    {
      if (env.step(static_cast<Action>(pick() % 3)).done)
      {
        env.reset();
      }
    }
    return trace.str();
  };
  const auto a = run();
  CHECK(a == run());
  const auto first = nlohmann::json::parse(a.substr(0, a.find('\n')));
  for (const char *key : {"step", "cell_interval", "action", "r_total", "r_delta_u", "r_cost", "p_before", "p_after",
                          "delta_u", "done_reason"})
  {
    CHECK(first.contains(key));
  }
}

TEST_CASE("unsteady advance")
{
  EnvConfig cfg;
  cfg.n_initial_cells = 8;
  cfg.max_cells = 100;
  cfg.do_nothing_patience = 0;

  auto model = pulse_model();
  SUBCASE("probability zero freezes time")
  {
    cfg.unsteady_step_prob = 0.0;
    AmrEnv env(model, cfg, 3);
    env.reset();
    const int k = model->step();
    const auto coeffs = env.solution().coeffs;
    for (int i = 0; i < 20; ++i)
    {
      env.step(Action::DoNothing);
    }
    CHECK(model->step() == k);
    CHECK(env.solution().coeffs == coeffs);
  }
  SUBCASE("probability one steps every time")
  {
    cfg.unsteady_step_prob = 1.0;
    AmrEnv env(model, cfg, 3);
    env.reset();
    const int k = model->step();
    for (int i = 0; i < 20; ++i)
    {
      env.step(Action::DoNothing);
    }
    CHECK(model->step() == k + 20);
  }
  SUBCASE("re-solve on an unchanged mesh reproduces the stepped solution")
  {
    cfg.unsteady_step_prob = 1.0;
    AmrEnv env(model, cfg, 4);
    env.reset();
    for (int i = 0; i < 15; ++i)
    {
      env.step(Action::DoNothing);
    }
    const auto again = model->solve(env.mesh());
    CHECK((again.coeffs - env.solution().coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("steady models ignore the step probability")
  {
    cfg.unsteady_step_prob = 1.0;
    cfg.n_initial_cells = 4;
    AmrEnv env(tanh_model(), cfg, 3);
    env.reset();
    const auto coeffs = env.solution().coeffs;
    env.step(Action::DoNothing);
    CHECK(env.solution().coeffs == coeffs);
  }
}

TEST_CASE("deployment cycle")
{
  auto model = tanh_model();
  EnvConfig cfg;
  TreeMesh1D mesh({0, 1}, 4, 25);
  auto u = model->solve(mesh);

  SUBCASE("do-nothing policy")
  {
    const auto out = deploy_cycle(mesh, u, [](const Observation &) { return Action::DoNothing; }, *model, cfg);
    CHECK(mesh.active_count() == 4);
    CHECK(out.count(Action::DoNothing) == 4);
    CHECK(out.u.coeffs == u.coeffs);
  }
  SUBCASE("refine guard at full budget")
  {
    mesh.set_max_cells(4);
    const auto out = deploy_cycle(mesh, u, [](const Observation &) { return Action::Refine; }, *model, cfg);
    CHECK(mesh.active_count() == 4);
    CHECK(out.count(Action::Refine) == 0);
  }
  SUBCASE("budget is never exceeded")
  {
    mesh.set_max_cells(11);
    for (int cycle = 0; cycle < 4; ++cycle)
    {
      u = deploy_cycle(mesh, u, [](const Observation &) { return Action::Refine; }, *model, cfg).u;
      CHECK(mesh.active_count() <= 11);
    }
    CHECK(mesh.active_count() == 11);
  }
  SUBCASE("cells are visited worst jump first")
  {
    std::vector<double> seen;
    deploy_cycle(
        mesh, u,
        [&](const Observation &o) {
          seen.push_back(o[0]);
          return Action::DoNothing;
        },
        *model, cfg);
    CHECK(std::is_sorted(seen.rbegin(), seen.rend()));
  }
  SUBCASE("coarsening invalidates the sibling")
  {
    mesh.refine(mesh.active_ids()[0]);
    u = model->solve(mesh);
    const auto out = deploy_cycle(mesh, u, [](const Observation &) { return Action::Coarsen; }, *model, cfg);
    CHECK(mesh.active_count() == 4);
    CHECK(out.count(Action::Coarsen) == 1);
    CHECK(out.log.size() == 4);
  }
}
