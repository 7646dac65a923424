// SPDX-License-Identifier: Apache-2.0

#include "drlamr/rl/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"

namespace drlamr::rl
{

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
  if (capacity == 0)
  {
    throw ConfigError("replay buffer capacity must be positive");
  }
  data_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t)
{
  if (data_.size() < capacity_)
  {
    data_.push_back(std::move(t));
  }
  else
  {
    data_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t n, std::mt19937_64 &rng) const
{
  // Floyd's algorithm: n distinct draws from [0, size).
  const std::size_t N = data_.size();
  n = std::min(n, N);
  std::vector<std::size_t> out;
  out.reserve(n);
  std::unordered_set<std::size_t> seen;
  for (std::size_t j = N - n; j < N; ++j)
  {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (seen.insert(t).second)
    {
      out.push_back(t);
    }
    else
    {
      seen.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

double TrainConfig::epsilon(long step) const
{
  const double horizon = eps_decay_frac * static_cast<double>(total_steps);
  const double frac = horizon > 0.0 ? std::min(1.0, static_cast<double>(step) / horizon) : 1.0;
  return eps_start + (eps_end - eps_start) * frac;
}

EnvStep AmrEnvironment::step(int action)
{
  const env::StepResult r = env_->step(static_cast<env::Action>(action));
  return {r.next_obs, r.reward.r_total, r.done, r.terminal};
}

EvalRecord evaluate(const QNetwork &net, const EnvFactory &factory, const TrainConfig &config, long step)
{
  EvalRecord rec;
  rec.step = step;
  if (config.eval_episodes <= 0)
  {
    return rec;
  }
  std::vector<double> totals;
  for (int i = 0; i < config.eval_episodes; ++i)
  {
    const std::uint64_t seed = config.eval_seed + static_cast<std::uint64_t>(i);
    auto env = factory(seed, config.split_mode);
    std::vector<double> obs = env->reset(seed);
    double total = 0.0;
    for (;;)
    {
      const EnvStep s = env->step(net.act(obs));
      total += s.reward;
      if (s.done)
      {
        break;
      }
      obs = s.obs;
    }
    totals.push_back(total);
  }
  double mean = 0.0;
  for (double t : totals)
  {
    mean += t;
  }
  mean /= static_cast<double>(totals.size());
  double var = 0.0;
  for (double t : totals)
  {
    var += (t - mean) * (t - mean);
  }
  rec.mean = mean;
  rec.stddev = std::sqrt(var / static_cast<double>(totals.size()));
  return rec;
}

namespace
{

void log_eval(std::ostream *log, const EvalRecord &e, bool best)
{
  if (log)
  {
    *log << nlohmann::json{{"step", e.step}, {"eval_mean", e.mean}, {"eval_std", e.stddev}, {"best", best}}.dump()
         << '\n';
  }
}

}  // namespace

TrainResult train_dqn(const EnvFactory &factory, const TrainConfig &config, std::ostream *log)
{
  if (config.batch_size < 1 || config.target_sync_every < 1 || config.gamma < 0.0 || config.gamma > 1.0 ||
      config.eps_start < 0.0 || config.eps_start > 1.0 || config.eps_end < 0.0 || config.eps_end > 1.0)
  {
    throw ConfigError("train_dqn: invalid training configuration");
  }
  std::mt19937_64 rng(config.seed);
  auto env = factory(config.seed, config.split_mode);

  std::vector<int> dims{env->obs_dim()};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(env->n_actions());
  QNetwork net(dims);
  net.initialize(rng);

  TrainResult result;
  result.final = net;
  result.best = net;
  if (config.total_steps <= 0)
  {
    return result;
  }

  QNetwork target = net;
  Adam adam(net, config.lr);
  ReplayBuffer buffer(config.buffer_size);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> random_action(0, env->n_actions() - 1);

  std::vector<double> obs = env->reset(config.seed);
  double ep_reward = 0.0;
  long ep_len = 0, episode = 0;
  double loss_ma = 0.0;
  bool have_loss = false;
  bool have_best = false;

  const int dim = env->obs_dim();
  Eigen::MatrixXd batch_obs(dim, config.batch_size), batch_next(dim, config.batch_size);
  std::vector<int> batch_actions(config.batch_size);
  Eigen::VectorXd targets(config.batch_size);

  for (long step = 0; step < config.total_steps; ++step)
  {
    const double eps = config.epsilon(step);
    const int action = u01(rng) < eps ? random_action(rng) : net.act(obs);
    EnvStep s = env->step(action);
    ep_reward += s.reward;
    ++ep_len;
    buffer.push({obs, action, s.reward, s.obs, s.terminal});

    if (step + 1 >= config.warmup && buffer.size() >= static_cast<std::size_t>(config.batch_size))
    {
      const auto idx = buffer.sample(config.batch_size, rng);
      for (int i = 0; i < config.batch_size; ++i)
      {
        const Transition &t = buffer.at(idx[i]);
        batch_obs.col(i) = Eigen::Map<const Eigen::VectorXd>(t.obs.data(), dim);
        batch_next.col(i) = Eigen::Map<const Eigen::VectorXd>(t.next_obs.data(), dim);
        batch_actions[i] = t.action;
      }
      const Eigen::MatrixXd q_next = target.forward_batch(batch_next);
      for (int i = 0; i < config.batch_size; ++i)
      {
        const Transition &t = buffer.at(idx[i]);
        targets[i] = t.reward + (t.terminal ? 0.0 : config.gamma * q_next.col(i).maxCoeff());
      }
      const BackwardResult g = backward(net, batch_obs, batch_actions, targets, config.clip_norm);
      adam.step(net, g.grads);
      loss_ma = have_loss ? 0.99 * loss_ma + 0.01 * g.loss : g.loss;
      have_loss = true;
    }

    if ((step + 1) % config.target_sync_every == 0)
    {
      target = net;
    }

    if (s.done)
    {
      EpisodeRecord rec{step + 1, episode, ep_reward, ep_len, eps, loss_ma};
      result.episodes.push_back(rec);
      if (log)
      {
        *log << nlohmann::json{{"step", rec.step},     {"episode", rec.episode}, {"ep_reward", rec.ep_reward},
                               {"ep_len", rec.ep_len}, {"epsilon", rec.epsilon}, {"loss_ma", rec.loss_ma}}
                    .dump()
             << '\n';
      }
      ++episode;
      ep_reward = 0.0;
      ep_len = 0;
      obs = env->reset();
    }
    else
    {
      obs = std::move(s.obs);
    }

    if (config.eval_every > 0 && (step + 1) % config.eval_every == 0 && step + 1 < config.total_steps)
    {
      const EvalRecord e = evaluate(net, factory, config, step + 1);
      result.evals.push_back(e);
      const bool better = !have_best || e.mean > result.best_eval.mean;
      if (better)
      {
        result.best = net;
        result.best_eval = e;
        have_best = true;
      }
      log_eval(log, e, better);
    }
  }

  result.final = net;
  result.final_eval = evaluate(net, factory, config, config.total_steps);
  result.evals.push_back(result.final_eval);
  const bool final_best = !have_best || result.final_eval.mean >= result.best_eval.mean;
  if (final_best)
  {
    result.best = net;
    result.best_eval = result.final_eval;
  }
  log_eval(log, result.final_eval, final_best);
  return result;
}

double known_q(const std::vector<double> &obs, env::Action action, double gamma_c, const KnownParams &params)
{
  if (gamma_c == 0.0 || action == env::Action::DoNothing)
  {
    return 0.0;
  }
  if (static_cast<int>(obs.size()) <= env::kObsResourceIndex)
  {
    throw DimensionMismatch("known_q: observation has no resource entry");
  }
  const double p = obs[env::kObsResourceIndex];
  const double dp = 1.0 / params.max_cells;
  const double p_after = action == env::Action::Refine ? p + dp : std::max(p - dp, dp);
  const double b_after = env::barrier(p_after, params.barrier);
  if (std::isinf(b_after))
  {
    return -std::numeric_limits<double>::infinity();
  }
  return -gamma_c * (b_after - env::barrier(p, params.barrier));
}

Eigen::VectorXd TunablePolicy::scores(const std::vector<double> &obs, double gamma_c) const
{
  Eigen::VectorXd q = learned.forward(obs);
  for (int a = 0; a < q.size(); ++a)
  {
    q[a] += known_q(obs, static_cast<env::Action>(a), gamma_c, known);
  }
  return q;
}

env::Action TunablePolicy::act(const std::vector<double> &obs, double gamma_c) const
{
  return static_cast<env::Action>(QNetwork::argmax(scores(obs, gamma_c)));
}

env::Policy greedy_policy(const QNetwork &net)
{
  return [net](const env::Observation &o) { return static_cast<env::Action>(net.act(o)); };
}

env::Policy tunable_policy(const TunablePolicy &policy, double gamma_c)
{
  return [policy, gamma_c](const env::Observation &o) { return policy.act(o, gamma_c); };
}

}  // namespace drlamr::rl
