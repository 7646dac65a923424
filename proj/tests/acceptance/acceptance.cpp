// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Usage: acceptance [criterion numbers...] (default: all).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drlamr/app/commands.hpp"
#include "drlamr/app/config.hpp"
#include "drlamr/env/reward.hpp"
#include "drlamr/error.hpp"
#include "drlamr/fem/measures.hpp"
#include "drlamr/rl/dqn.hpp"
#include "drlamr/rl/qnetwork.hpp"

using namespace drlamr;

namespace
{

// ---- pinned tolerances

constexpr int kConvergenceLevels = 4;
constexpr int kFitLevels = 3;
constexpr double kHdgMinOrder = 3.5;
constexpr int kMonotoneTrials = 50;
constexpr int kMonotoneMaxCells = 64;
constexpr double kMonotoneSlack = 1e-10;
constexpr double kAntisymmetryTol = 1e-12;
constexpr double kBarrierTol = 1e-14;
constexpr double kGradRelTol = 1e-5;
constexpr double kTabularTol = 1e-2;
constexpr double kRiseSigmas = 3.0;
constexpr long kFirstWindow = 1000;
constexpr int kDeployBudget = 500;
constexpr double kDeployErrorFactor = 2.0;
constexpr int kGenBudget = 100;
constexpr double kGenInnerFraction = 0.8;
constexpr double kGenInnerRadius = 3.0;
constexpr double kGenMonotoneRelSlack = 1e-12;
constexpr int kUnsteadyBudget = 100;
constexpr double kUnsteadyGammaC = 100.0;
constexpr long kUnsteadyTrainSteps = 50000;
constexpr double kUnsteadyCellFactor = 0.5;
constexpr double kUnsteadyErrorFactor = 3.0;
constexpr int kCycles = 6;
constexpr int kSeedsNeeded = 2;
constexpr std::array<std::uint64_t, 3> kSeeds{1, 2, 3};
constexpr int kTunableObservations = 1000;
constexpr int kTunableNets = 20;

struct Verdict
{
  bool pass = false;
  std::string detail;
};

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---- shared trained models for criteria 5 to 8

struct SteadyModels
{
  std::vector<app::TrainOutput> runs;
};

app::RunConfig steady_train_config(std::uint64_t seed)
{
  app::RunConfig c;
  c.case_name = "SteadyAdv1D";
  c.max_cells = 25;
  c.gamma_c = 25.0;
  c.init = "random";
  c.seed = seed;
  c.train.seed = seed;
  c.train.total_steps = 100000;
  return c;
}

const SteadyModels &steady_models()
{
  static SteadyModels models = [] {
    SteadyModels m;
    for (std::uint64_t s : kSeeds)
    {
      const auto t0 = std::chrono::steady_clock::now();
      m.runs.push_back(app::run_train(steady_train_config(s)));
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << "  trained SteadyAdv1D seed " << s << " in " << fmt(secs) << " s, best eval "
                << fmt(m.runs.back().result.best_eval.mean) << '\n';
    }
    return m;
  }();
  return models;
}

// ---- criteria

Verdict discretization_orders()
{
  Verdict v{true, ""};
  app::RunConfig c;
  c.levels = kConvergenceLevels;
  c.case_name = "SteadyAdv1D";
  for (int p = 1; p <= 3; ++p)
  {
    c.p_order = p;
    const double order = app::fitted_order(app::run_convergence(c), kFitLevels);
    v.pass = v.pass && order >= p;
    v.detail += "adv p=" + std::to_string(p) + " order " + fmt(order) + " (>= " + std::to_string(p) + "); ";
  }
  c.case_name = "PoissonHDG1D";
  c.p_order = 3;
  const double order = app::fitted_order(app::run_convergence(c), kFitLevels);
  v.pass = v.pass && order >= kHdgMinOrder;
  v.detail += "hdg p=3 order " + fmt(order) + " (>= " + fmt(kHdgMinOrder) + ")";
  return v;
}

Verdict galerkin_monotonicity()
{
  Verdict v{true, ""};
  for (const char *name : {"SteadyAdv1D", "PoissonHDG1D"})
  {
    app::RunConfig c;
    c.case_name = name;
    const app::ExperimentCase ec = c.experiment();
    auto model = app::make_model(ec, c.resolved_p());
    const auto exact = ec.exact_at(0.0);
    std::mt19937_64 rng(20240611);
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < kMonotoneTrials; ++trial)
    {
      TreeMesh1D mesh(ec.domain, ec.n_initial_cells, kMonotoneMaxCells);
      const int target = std::uniform_int_distribution<int>(ec.n_initial_cells, kMonotoneMaxCells - 1)(rng);
      while (mesh.active_count() < target)
      {
        const auto ids = mesh.active_ids();
        mesh.refine(ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)]);
      }
      const double before = fem::l2_error(model->solve(mesh), exact);
      const auto ids = mesh.active_ids();
      mesh.refine(ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)]);
      const double after = fem::l2_error(model->solve(mesh), exact);
      worst = std::max(worst, after - before);
    }
    v.pass = v.pass && worst <= kMonotoneSlack;
    v.detail += std::string(name) + " max increase " + fmt(worst) + "; ";
  }
  v.detail += "tol " + fmt(kMonotoneSlack);
  return v;
}

Verdict reward_suite()
{
  using env::Action;
  using env::BarrierKind;
  bool ok = true;
  std::string why;
  auto fail = [&](const std::string &s) {
    ok = false;
    why += s + "; ";
  };
  const std::array<BarrierKind, 3> kinds{BarrierKind::Sqrt, BarrierKind::Polynomial, BarrierKind::Hortative};

  for (BarrierKind k : kinds)
  {
    for (double du : {0.0, 1e-9, 0.3, 4.0})
    {
      for (double p : {0.1, 0.5, 0.8})
      {
        if (env::reward(Action::DoNothing, du, p, p, 25.0, k).r_total != 0.0)
        {
          fail("do-nothing reward not exactly 0");
        }
      }
    }
  }
  for (BarrierKind k : kinds)
  {
    const double pb = 0.4, pa = 0.44, gc = 25.0;
    const double expect = -gc * (env::barrier(pa, k) - env::barrier(pb, k));
    if (std::abs(env::reward(Action::Refine, 0.0, pb, pa, gc, k).r_total - expect) > 1e-12 * std::abs(expect))
    {
      fail("refine with zero change is not -gamma_c R_dC");
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logu(-18.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i)
  {
    const double du = std::pow(10.0, logu(rng));
    const auto r = env::reward(Action::Refine, du, 0.3, 0.34, 25.0, BarrierKind::Sqrt);
    const auto c = env::reward(Action::Coarsen, du, 0.34, 0.3, 25.0, BarrierKind::Sqrt);
    worst = std::max(worst, std::abs(r.r_delta_u + c.r_delta_u));
  }
  if (worst > kAntisymmetryTol)
  {
    fail("antisymmetry off by " + fmt(worst));
  }
  auto sqrt_b = [](double p) { return std::sqrt(p) / (1.0 - p); };
  auto poly_b = [](double p) { return p / (1.0 - p); };
  auto hort_b = [](double p) { return p / (1.0 - p) - (1.0 / std::sqrt(p) - 1.0); };
  for (double p : {0.0, 0.25, 0.5, 0.9})
  {
    const std::array<double, 3> expect{sqrt_b(p), poly_b(p), p > 0.0 ? hort_b(p) : 0.0};
    for (int k = 0; k < 3; ++k)
    {
      if (kinds[k] == BarrierKind::Hortative && p == 0.0)
      {
        bool threw = false;
        try
        {
          env::barrier(p, kinds[k]);
        }
        catch (const DomainError &)
        {
          threw = true;
        }
        if (!threw)
        {
          fail("hortative barrier at 0 must be a domain error");
        }
        continue;
      }
      if (std::abs(env::barrier(p, kinds[k]) - expect[k]) > kBarrierTol * std::max(1.0, std::abs(expect[k])))
      {
        fail("barrier " + env::to_string(kinds[k]) + " at " + fmt(p));
      }
    }
  }
  return {ok, ok ? "do-nothing 0, zero-change refine, antisymmetry max " + fmt(worst) + ", barrier closed forms"
                 : why};
}

// Deterministic chain s' = (s + a) mod 3.
constexpr double kMdpR[3][3] = {{1.0, 0.0, -1.0}, {0.0, 2.0, 0.0}, {-1.0, 0.0, 0.5}};
constexpr double kMdpGamma = 0.9;

class ChainMdp : public rl::Environment
{
public:
  int obs_dim() const override { return 3; }
  int n_actions() const override { return 3; }
  std::vector<double> reset(std::uint64_t seed) override
  {
    s_ = static_cast<int>(seed % 3);
    t_ = 0;
    return state();
  }
  std::vector<double> reset() override { return reset(static_cast<std::uint64_t>(s_ + 1)); }
  rl::EnvStep step(int a) override
  {
    const double r = kMdpR[s_][a];
    s_ = (s_ + a) % 3;
    return {state(), r, ++t_ >= 25, false};
  }

private:
  std::vector<double> state() const
  {
    std::vector<double> o(3, 0.0);
    o[s_] = 1.0;
    return o;
  }
  int s_ = 0, t_ = 0;
};

Verdict dqn_machinery()
{
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 5; ++trial)
  {
    rl::QNetwork net({4, 6, 5, 3});
    net.initialize(rng);
    for (auto &b : net.b)
    {
      for (Eigen::Index i = 0; i < b.size(); ++i)
      {
        b[i] = 0.2 * nd(rng);
      }
    }
    const int batch = 4;
    Eigen::MatrixXd x(4, batch);
    std::vector<int> acts(batch);
    Eigen::VectorXd y(batch);
    for (int i = 0; i < batch; ++i)
    {
      for (int r = 0; r < 4; ++r)
      {
        x(r, i) = nd(rng);
      }
      acts[i] = i % 3;
      y[i] = nd(rng);
    }
    const auto g = rl::backward(net, x, acts, y, std::numeric_limits<double>::infinity());
    auto loss = [&](const rl::QNetwork &n) {
      const Eigen::MatrixXd q = n.forward_batch(x);
      double s = 0.0;
      for (int i = 0; i < batch; ++i)
      {
        s += std::pow(q(acts[i], i) - y[i], 2);
      }
      return s / batch;
    };
    double num = 0.0, den = 0.0;
    const double h = 1e-6;
    for (int l = 0; l < net.n_layers(); ++l)
    {
      auto probe = [&](double &param, double analytic) {
        const double keep = param;
        param = keep + h;
        const double lp = loss(net);
        param = keep - h;
        const double lm = loss(net);
        param = keep;
        const double fd = (lp - lm) / (2 * h);
        num += (fd - analytic) * (fd - analytic);
        den += fd * fd;
      };
      for (Eigen::Index k = 0; k < net.W[l].size(); ++k)
      {
        probe(net.W[l].data()[k], g.grads.W[l].data()[k]);
      }
      for (Eigen::Index k = 0; k < net.b[l].size(); ++k)
      {
        probe(net.b[l][k], g.grads.b[l][k]);
      }
    }
    worst_rel = std::max(worst_rel, std::sqrt(num / den));
  }

  // Value iteration oracle.
  std::array<std::array<double, 3>, 3> q{};
  for (int it = 0; it < 3000; ++it)
  {
    auto next = q;
    for (int s = 0; s < 3; ++s)
    {
      for (int a = 0; a < 3; ++a)
      {
        const auto &n = q[(s + a) % 3];
        next[s][a] = kMdpR[s][a] + kMdpGamma * std::max({n[0], n[1], n[2]});
      }
    }
    q = next;
  }
  rl::TrainConfig cfg;
  cfg.total_steps = 40000;
  cfg.gamma = kMdpGamma;
  cfg.lr = 3e-3;
  cfg.batch_size = 32;
  cfg.warmup = 200;
  cfg.target_sync_every = 250;
  cfg.eps_start = cfg.eps_end = 1.0;
  cfg.hidden = {};
  cfg.eval_every = 0;
  cfg.eval_episodes = 1;
  cfg.seed = 11;
  const auto res = rl::train_dqn([](std::uint64_t, bool) { return std::make_unique<ChainMdp>(); }, cfg);
  double worst_q = 0.0;
  for (int s = 0; s < 3; ++s)
  {
    std::vector<double> o(3, 0.0);
    o[s] = 1.0;
    const auto out = res.final.forward(o);
    for (int a = 0; a < 3; ++a)
    {
      worst_q = std::max(worst_q, std::abs(out[a] - q[s][a]));
    }
  }
  return {worst_rel <= kGradRelTol && worst_q <= kTabularTol,
          "gradient rel. error " + fmt(worst_rel) + " (<= " + fmt(kGradRelTol) + "), max |Q - Q*| " + fmt(worst_q) +
              " (<= " + fmt(kTabularTol) + ")"};
}

double sample_stddev(const std::vector<double> &x)
{
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double s = 0.0;
  for (double v : x)
  {
    s += (v - m) * (v - m);
  }
  return std::sqrt(s / (x.size() - 1));
}

Verdict training_progress()
{
  int passed = 0;
  std::string detail;
  for (std::size_t i = 0; i < kSeeds.size(); ++i)
  {
    const auto &r = steady_models().runs[i].result;
    std::vector<double> early;
    for (const auto &e : r.episodes)
    {
      if (e.step <= kFirstWindow)
      {
        early.push_back(e.ep_reward);
      }
    }
    bool ok = false;
    std::string d = "seed " + std::to_string(kSeeds[i]) + ": ";
    if (early.size() >= 2)
    {
      const double m = std::accumulate(early.begin(), early.end(), 0.0) / early.size();
      const double sd = sample_stddev(early);
      ok = r.best_eval.mean >= m + kRiseSigmas * sd;
      d += "best " + fmt(r.best_eval.mean) + " vs early " + fmt(m) + " + 3*" + fmt(sd);
    }
    else
    {
      d += "fewer than two episodes in the first window";
    }
    passed += ok;
    detail += d + (ok ? " ok; " : " no; ");
  }
  return {passed >= kSeedsNeeded, detail + std::to_string(passed) + "/3 seeds"};
}

Verdict policy_competitiveness()
{
  app::RunConfig base;
  base.case_name = "SteadyAdv1D";
  base.cycles = kCycles;
  base.indicator = "gradient";
  base.strategy = "bulk:0.5:0.5";
  const auto heuristic = app::run_baseline(base).rows.back();
  int passed = 0;
  std::string detail = "baseline dofs " + std::to_string(heuristic.dofs) + " err " + fmt(heuristic.l2_error) + "; ";
  for (std::size_t i = 0; i < kSeeds.size(); ++i)
  {
    const auto &run = steady_models().runs[i];
    app::RunConfig c = base;
    c.max_cells = kDeployBudget;
    const auto rl = app::run_deploy(run.result.best, run.meta, c).rows.back();
    const bool ok = rl.l2_error <= kDeployErrorFactor * heuristic.l2_error && rl.dofs <= heuristic.dofs;
    passed += ok;
    detail += "seed " + std::to_string(kSeeds[i]) + " dofs " + std::to_string(rl.dofs) + " err " + fmt(rl.l2_error) +
              (ok ? " ok; " : " no; ");
  }
  return {passed >= kSeedsNeeded, detail + std::to_string(passed) + "/3 seeds"};
}

Verdict generalization()
{
  int passed = 0;
  std::string detail;
  for (std::size_t i = 0; i < kSeeds.size(); ++i)
  {
    const auto &run = steady_models().runs[i];
    app::RunConfig c;
    c.case_name = "SteadyAdvGen1D";
    c.max_cells = kGenBudget;
    c.cycles = kCycles;
    const app::CycleRun dep = app::run_deploy(run.result.best, run.meta, c);
    int refines = 0, inner = 0;
    for (const auto &d : dep.decisions)
    {
      if (d.executed == env::Action::Refine)
      {
        ++refines;
        inner += std::abs(0.5 * (d.cell.lo + d.cell.hi)) <= kGenInnerRadius;
      }
    }
    bool monotone = true;
    for (std::size_t k = 1; k < dep.rows.size(); ++k)
    {
      monotone = monotone && dep.rows[k].l2_error <= dep.rows[k - 1].l2_error * (1.0 + kGenMonotoneRelSlack);
    }
    const double frac = refines > 0 ? static_cast<double>(inner) / refines : 0.0;
    const bool ok = refines > 0 && frac >= kGenInnerFraction && monotone;
    passed += ok;
    detail += "seed " + std::to_string(kSeeds[i]) + " inner " + std::to_string(inner) + "/" + std::to_string(refines) +
              (monotone ? " monotone" : " non-monotone") + " err " + fmt(dep.rows.back().l2_error) +
              (ok ? " ok; " : " no; ");
  }
  return {passed >= kSeedsNeeded, detail + std::to_string(passed) + "/3 seeds"};
}

Verdict unsteady_economy()
{
  app::RunConfig c;
  c.case_name = "UnsteadyAdv1D";
  c.strategy = "bulk:0.5:0.5";
  c.indicator = "gradient";
  c.cycles = kCycles;
  const app::UnsteadyRun heuristic = app::run_unsteady(c);
  const double h_cells = heuristic.mean_cells(), h_err = heuristic.rows.back().l2_error;
  int passed = 0;
  std::string detail = "heuristic mean cells " + fmt(h_cells) + " err " + fmt(h_err) + "; ";
  for (std::uint64_t s : kSeeds)
  {
    app::RunConfig t = c;
    t.max_cells = 25;
    t.gamma_c = kUnsteadyGammaC;
    t.init = "random";
    t.seed = s;
    t.train.seed = s;
    t.train.total_steps = kUnsteadyTrainSteps;
    const app::TrainOutput out = app::run_train(t);
    app::RunConfig d = t;
    d.max_cells = kUnsteadyBudget;
    const env::Policy policy = app::policy_for(out.result.best, out.meta, d);
    const app::UnsteadyRun rl = app::run_unsteady(d, &policy);
    const bool ok = rl.mean_cells() <= kUnsteadyCellFactor * h_cells &&
                    rl.rows.back().l2_error <= kUnsteadyErrorFactor * h_err;
    passed += ok;
    detail += "seed " + std::to_string(s) + " mean cells " + fmt(rl.mean_cells()) + " err " +
              fmt(rl.rows.back().l2_error) + (ok ? " ok; " : " no; ");
  }
  return {passed >= kSeedsNeeded, detail + std::to_string(passed) + "/3 seeds"};
}

Verdict tunable_policy()
{
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> lg(-16.0, 0.0), pr(0.0, 1.0), phigh(0.5, 1.0);
  const rl::KnownParams known{env::BarrierKind::Sqrt, 25};
  int mismatches = 0, refine_after = 0;
  double largest_threshold = 0.0;
  for (int n = 0; n < kTunableNets; ++n)
  {
    rl::QNetwork net({env::kBaseObsDim, 32, 32, env::kNumActions});
    net.initialize(rng);
    const rl::TunablePolicy tp{net, known};
    for (int i = 0; i < kTunableObservations / kTunableNets; ++i)
    {
      const std::vector<double> o{lg(rng), lg(rng), lg(rng), lg(rng), pr(rng)};
      mismatches += tp.act(o, 0.0) != static_cast<env::Action>(net.act(o));
    }
    // Learned spread bounds the gamma_c beyond which refine loses to do-nothing.
    std::vector<std::vector<double>> high;
    double threshold = 0.0;
    for (int i = 0; i < kTunableObservations; ++i)
    {
      high.push_back({lg(rng), lg(rng), lg(rng), lg(rng), phigh(rng)});
      const auto q = net.forward(high.back());
      const double p = high.back()[env::kObsResourceIndex];
      const double cost = env::barrier(p + 1.0 / known.max_cells, known.barrier) - env::barrier(p, known.barrier);
      if (std::isfinite(cost))
      {
        threshold = std::max(threshold, (q[2] - q[1]) / cost);
      }
    }
    largest_threshold = std::max(largest_threshold, threshold);
    const double gc = 1.0 + 2.0 * threshold;
    for (const auto &o : high)
    {
      refine_after += tp.act(o, gc) == env::Action::Refine;
    }
  }
  return {mismatches == 0 && refine_after == 0,
          std::to_string(mismatches) + " greedy mismatches at gamma_c=0 over " + std::to_string(kTunableObservations) +
              " observations; " + std::to_string(refine_after) +
              " refines with p >= 0.5 beyond the per-net threshold (largest " + fmt(largest_threshold) + ")"};
}

Verdict determinism()
{
  bool ok = true;
  std::string detail;
  auto csv_twice = [&](const std::string &what, const std::function<std::string()> &make) {
    const std::string a = make(), b = make();
    if (a != b || a.empty())
    {
      ok = false;
      detail += what + " differs; ";
    }
  };
  app::RunConfig base;
  csv_twice("baseline", [&] {
    std::ostringstream s;
    app::write_cycle_csv(s, app::run_baseline(base).rows);
    return s.str();
  });
  csv_twice("convergence", [&] {
    app::RunConfig c;
    c.case_name = "PoissonHDG1D";
    std::ostringstream s;
    app::write_convergence_csv(s, app::run_convergence(c));
    return s.str();
  });
  csv_twice("unsteady", [&] {
    app::RunConfig c;
    c.case_name = "UnsteadyAdv1D";
    c.t_final = 1.0;
    std::ostringstream s;
    app::write_unsteady_csv(s, app::run_unsteady(c).rows);
    return s.str();
  });
  app::RunConfig t;
  t.init = "random";
  t.seed = t.train.seed = 42;
  t.train.total_steps = 3000;
  t.train.eval_every = 1000;
  t.train.eval_episodes = 2;
  csv_twice("train+deploy", [&] {
    std::ostringstream log;
    const app::TrainOutput out = app::run_train(t, &log);
    app::RunConfig d = t;
    d.max_cells = 100;
    std::ostringstream s;
    app::write_cycle_csv(s, app::run_deploy(out.result.best, out.meta, d).rows);
    return log.str() + rl::to_json(out.result.best, out.meta).dump() + s.str();
  });

  // Model file round trip, compared bit for bit.
  const app::TrainOutput out = app::run_train(t);
  const auto path = std::filesystem::temp_directory_path() / "drlamr_acceptance_model.json";
  rl::save_model(path.string(), out.result.best, out.meta);
  rl::ModelMeta meta;
  const rl::QNetwork back = rl::load_model(path.string(), &meta);
  std::filesystem::remove(path);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-16.0, 1.0);
  int differing = 0;
  for (int i = 0; i < 1000; ++i)
  {
    const std::vector<double> o{u(rng), u(rng), u(rng), u(rng), std::abs(u(rng)) / 16.0};
    const Eigen::VectorXd a = out.result.best.forward(o), b = back.forward(o);
    for (int k = 0; k < a.size(); ++k)
    {
      differing += std::memcmp(&a[k], &b[k], sizeof(double)) != 0;
    }
  }
  if (differing > 0 || meta.config_hash != out.meta.config_hash)
  {
    ok = false;
    detail += std::to_string(differing) + " forward outputs changed after reload; ";
  }
  return {ok, ok ? "baseline, convergence, unsteady and train+deploy CSV identical; reload bit-exact" : detail};
}

}  // namespace

int main(int argc, char **argv)
{
  const std::map<int, std::pair<const char *, std::function<Verdict()>>> criteria{
      {1, {"discretization correctness", discretization_orders}},
      {2, {"Galerkin monotonicity", galerkin_monotonicity}},
      {3, {"reward function", reward_suite}},
      {4, {"DQN machinery", dqn_machinery}},
      {5, {"training progress", training_progress}},
      {6, {"policy competitiveness", policy_competitiveness}},
      {7, {"generalization", generalization}},
      {8, {"unsteady economy", unsteady_economy}},
      {9, {"tunable policy", tunable_policy}},
      {10, {"determinism and serialization", determinism}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i)
  {
    selected.insert(std::atoi(argv[i]));
  }
  int failed = 0;
  for (const auto &[id, entry] : criteria)
  {
    if (!selected.empty() && !selected.count(id))
    {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try
    {
      v = entry.second();
    }
    catch (const std::exception &e)
    {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::cout << "criterion " << id << " (" << entry.first << "): " << (v.pass ? "PASS" : "FAIL") << " [" << fmt(secs)
              << " s] " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
