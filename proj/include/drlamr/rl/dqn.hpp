// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "drlamr/env/amr_env.hpp"
#include "drlamr/rl/qnetwork.hpp"

namespace drlamr::rl
{

struct Transition
{
  std::vector<double> obs;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool terminal = false;  // no bootstrap from next_obs
};

class ReplayBuffer
{
public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition &at(std::size_t i) const { return data_[i]; }
  // min(n, size()) distinct indices, uniformly.
  std::vector<std::size_t> sample(std::size_t n, std::mt19937_64 &rng) const;

private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

struct EnvStep
{
  std::vector<double> obs;
  double reward = 0.0;
  bool done = false;
  bool terminal = false;
};

class Environment
{
public:
  virtual ~Environment() = default;
  virtual int obs_dim() const = 0;
  virtual int n_actions() const = 0;
  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual std::vector<double> reset() = 0;
  virtual EnvStep step(int action) = 0;
};

// (seed, split_mode) -> environment. In split mode the environment must
// compute rewards without the resource term.
using EnvFactory = std::function<std::unique_ptr<Environment>(std::uint64_t seed, bool split_mode)>;

struct TrainConfig
{
  long total_steps = 100000;
  double gamma = 0.99;
  double lr = 1e-3;
  int batch_size = 64;
  std::size_t buffer_size = 50000;
  long warmup = 1000;
  long target_sync_every = 1000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.2;
  double clip_norm = 10.0;
  std::vector<int> hidden{64, 64};
  std::uint64_t seed = 0;
  bool split_mode = false;
  long eval_every = 5000;  // 0 disables periodic evaluation
  int eval_episodes = 10;
  std::uint64_t eval_seed = 1000003;

  double epsilon(long step) const;
};

struct EpisodeRecord
{
  long step = 0;  // global step at episode end
  long episode = 0;
  double ep_reward = 0.0;
  long ep_len = 0;
  double epsilon = 0.0;
  double loss_ma = 0.0;
};

struct EvalRecord
{
  long step = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct TrainResult
{
  QNetwork best;   // highest evaluation mean, final snapshot included
  QNetwork final;
  std::vector<EpisodeRecord> episodes;
  std::vector<EvalRecord> evals;
  EvalRecord best_eval;
  EvalRecord final_eval;
};

// Greedy rollouts of `net` on fresh environments, one per seed eval_seed + i.
EvalRecord evaluate(const QNetwork &net, const EnvFactory &factory, const TrainConfig &config, long step = 0);

// `log`, when given, receives one JSONL line per finished episode and per evaluation.
TrainResult train_dqn(const EnvFactory &factory, const TrainConfig &config, std::ostream *log = nullptr);

// Adapter exposing AmrEnv through the generic interface.
class AmrEnvironment : public Environment
{
public:
  explicit AmrEnvironment(std::unique_ptr<env::AmrEnv> env) : env_(std::move(env)) {}
  int obs_dim() const override { return env_->obs_dim(); }
  int n_actions() const override { return env::kNumActions; }
  std::vector<double> reset(std::uint64_t seed) override { return env_->reset(seed); }
  std::vector<double> reset() override { return env_->reset(); }
  EnvStep step(int action) override;
  env::AmrEnv &inner() { return *env_; }

private:
  std::unique_ptr<env::AmrEnv> env_;
};

struct KnownParams
{
  env::BarrierKind barrier = env::BarrierKind::Sqrt;
  int max_cells = 25;
};

// Closed-form cost part of Q with no discounting of the cost:
// -gamma_c (B(p_after) - B(p)), p read from the observation.
double known_q(const std::vector<double> &obs, env::Action action, double gamma_c, const KnownParams &params);

struct TunablePolicy
{
  QNetwork learned;  // trained in split mode
  KnownParams known;

  Eigen::VectorXd scores(const std::vector<double> &obs, double gamma_c) const;
  env::Action act(const std::vector<double> &obs, double gamma_c) const;
};

env::Policy greedy_policy(const QNetwork &net);
env::Policy tunable_policy(const TunablePolicy &policy, double gamma_c);

}  // namespace drlamr::rl
