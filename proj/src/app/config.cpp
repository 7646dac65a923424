// SPDX-License-Identifier: Apache-2.0

#include "drlamr/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"
#include "drlamr/indicators/indicators.hpp"

namespace drlamr::app
{

namespace
{

using nlohmann::json;

int line_of(const std::string &text, std::size_t offset)
{
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
  {
    line += text[i] == '\n';
  }
  return line;
}

// Line of the first occurrence of "key" as a JSON key, 0 when not found.
int line_of_key(const std::string &text, const std::string &key)
{
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos)
  {
    std::size_t q = pos + quoted.size();
    while (q < text.size() && std::isspace(static_cast<unsigned char>(text[q])))
    {
      ++q;
    }
    if (q < text.size() && text[q] == ':')
    {
      return line_of(text, pos);
    }
    pos += quoted.size();
  }
  return 0;
}

class Reader
{
public:
  Reader(const json &obj, const std::string &text, std::string scope)
      : obj_(obj), text_(text), scope_(std::move(scope))
  {
    if (!obj_.is_object())
    {
      throw ConfigError(where("") + "expected an object");
    }
  }

  template <class T>
  void get(const std::string &key, T &out)
  {
    seen_.insert(key);
    if (!obj_.contains(key))
    {
      return;
    }
    try
    {
      out = obj_.at(key).get<T>();
    }
    catch (const json::exception &)
    {
      throw ConfigError(where(key) + "'" + key + "' has the wrong type");
    }
  }

  template <class T>
  void get(const std::string &key, std::optional<T> &out)
  {
    if (obj_.contains(key) && !obj_.at(key).is_null())
    {
      T v{};
      get(key, v);
      out = v;
    }
    seen_.insert(key);
  }

  const json *child(const std::string &key)
  {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  void finish() const
  {
    for (const auto &[k, v] : obj_.items())
    {
      if (!seen_.count(k))
      {
        throw ConfigError(where(k) + "unknown key '" + (scope_.empty() ? "" : scope_ + ".") + k + "'");
      }
    }
  }

private:
  std::string where(const std::string &key) const
  {
    const int line = key.empty() ? 0 : line_of_key(text_, key);
    return line > 0 ? "config line " + std::to_string(line) + ": " : "config: ";
  }

  const json &obj_;
  const std::string &text_;
  std::string scope_;
  std::set<std::string> seen_;
};

void read_train(const json &j, const std::string &text, rl::TrainConfig &t)
{
  Reader r(j, text, "train");
  r.get("total_steps", t.total_steps);
  r.get("gamma", t.gamma);
  r.get("lr", t.lr);
  r.get("batch_size", t.batch_size);
  r.get("buffer_size", t.buffer_size);
  r.get("warmup", t.warmup);
  r.get("target_sync_every", t.target_sync_every);
  r.get("eps_start", t.eps_start);
  r.get("eps_end", t.eps_end);
  r.get("eps_decay_frac", t.eps_decay_frac);
  r.get("clip_norm", t.clip_norm);
  r.get("hidden", t.hidden);
  r.get("split_mode", t.split_mode);
  r.get("eval_every", t.eval_every);
  r.get("eval_episodes", t.eval_episodes);
  r.get("eval_seed", t.eval_seed);
  r.finish();
}

void read_introspect(const json &j, const std::string &text, IntrospectSpec &s)
{
  Reader r(j, text, "introspect");
  r.get("p", s.p);
  r.get("n", s.n);
  r.get("lo", s.lo);
  r.get("hi", s.hi);
  r.finish();
}

}  // namespace

ExperimentCase RunConfig::experiment() const
{
  CaseParams params;
  params.gen_n = gen_n;
  params.dt = dt;
  params.t_final = t_final;
  return make_case(case_kind(), params);
}

int RunConfig::resolved_p() const { return p_order ? *p_order : experiment().default_p; }

int RunConfig::resolved_initial_cells() const
{
  return n_initial_cells ? *n_initial_cells : experiment().n_initial_cells;
}

void RunConfig::validate() const
{
  const CaseKind kind = case_kind();
  if (p_order && (*p_order < 0 || *p_order > 10))
  {
    throw ConfigError("p_order must lie in [0, 10]");
  }
  if (n_initial_cells && *n_initial_cells < 1)
  {
    throw ConfigError("n_initial_cells must be positive");
  }
  if (max_cells < resolved_initial_cells())
  {
    throw ConfigError("max_cells must be at least the number of initial cells");
  }
  if (!(gamma_c >= 0.0) || !std::isfinite(gamma_c))
  {
    throw ConfigError("gamma_c must be finite and non-negative");
  }
  env::parse_barrier(barrier);
  env::parse_init_mode(init);
  indicators::parse_indicator(indicator);
  try
  {
    indicators::MarkingStrategy::parse(strategy).validate();
  }
  catch (const InvalidFractions &e)
  {
    throw ConfigError(std::string("strategy: ") + e.what());
  }
  if (cycles < 0 || levels < 0 || levels > 20)
  {
    throw ConfigError("cycles must be non-negative and levels in [0, 20]");
  }
  if (episode_len < 1 || do_nothing_patience < 1)
  {
    throw ConfigError("episode_len and do_nothing_patience must be positive");
  }
  if (!(unsteady_step_prob >= 0.0 && unsteady_step_prob <= 1.0))
  {
    throw ConfigError("unsteady_step_prob must lie in [0, 1]");
  }
  if (gen_n < 1)
  {
    throw ConfigError("gen_n must be positive");
  }
  if (kind == CaseKind::UnsteadyAdv1D && (!(dt > 0.0) || !(t_final >= 0.0)))
  {
    throw ConfigError("dt must be positive and t_final non-negative");
  }
  if (train.total_steps < 0 || train.batch_size < 1 || train.buffer_size < 1 || train.target_sync_every < 1 ||
      !(train.lr > 0.0) || !(train.gamma >= 0.0 && train.gamma <= 1.0) || train.eval_episodes < 0)
  {
    throw ConfigError("train: invalid hyperparameters");
  }
  for (int h : train.hidden)
  {
    if (h < 1)
    {
      throw ConfigError("train.hidden sizes must be positive");
    }
  }
  if (introspect.n < 2 || !(introspect.lo < introspect.hi))
  {
    throw ConfigError("introspect grid needs n >= 2 and lo < hi");
  }
  for (double p : introspect.p)
  {
    if (!(p >= 0.0 && p <= 1.0))
    {
      throw ConfigError("introspect p values must lie in [0, 1]");
    }
  }
}

RunConfig parse_run_config(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  RunConfig c;
  Reader r(j, text, "");
  r.get("case", c.case_name);
  r.get("p_order", c.p_order);
  r.get("n_initial_cells", c.n_initial_cells);
  r.get("max_cells", c.max_cells);
  r.get("gamma_c", c.gamma_c);
  r.get("barrier", c.barrier);
  r.get("cycles", c.cycles);
  r.get("seed", c.seed);
  r.get("init", c.init);
  r.get("episode_len", c.episode_len);
  r.get("do_nothing_patience", c.do_nothing_patience);
  r.get("unsteady_step_prob", c.unsteady_step_prob);
  r.get("overrun_penalty", c.overrun_penalty);
  r.get("gen_n", c.gen_n);
  r.get("dt", c.dt);
  r.get("t_final", c.t_final);
  r.get("indicator", c.indicator);
  r.get("strategy", c.strategy);
  r.get("levels", c.levels);
  r.get("out_dir", c.out_dir);
  r.get("model", c.model);
  if (const json *t = r.child("train"))
  {
    read_train(*t, text, c.train);
  }
  if (const json *s = r.child("introspect"))
  {
    read_introspect(*s, text, c.introspect);
  }
  r.finish();
  c.train.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

nlohmann::json to_json(const RunConfig &c)
{
  json j{{"case", c.case_name},
         {"p_order", c.resolved_p()},
         {"n_initial_cells", c.resolved_initial_cells()},
         {"max_cells", c.max_cells},
         {"gamma_c", c.gamma_c},
         {"barrier", c.barrier},
         {"cycles", c.cycles},
         {"seed", c.seed},
         {"init", c.init},
         {"episode_len", c.episode_len},
         {"do_nothing_patience", c.do_nothing_patience},
         {"unsteady_step_prob", c.unsteady_step_prob},
         {"overrun_penalty", c.overrun_penalty},
         {"gen_n", c.gen_n},
         {"dt", c.dt},
         {"t_final", c.t_final},
         {"indicator", c.indicator},
         {"strategy", c.strategy},
         {"levels", c.levels},
         {"out_dir", c.out_dir},
         {"model", c.model}};
  const auto &t = c.train;
  j["train"] = {{"total_steps", t.total_steps},
                {"gamma", t.gamma},
                {"lr", t.lr},
                {"batch_size", t.batch_size},
                {"buffer_size", t.buffer_size},
                {"warmup", t.warmup},
                {"target_sync_every", t.target_sync_every},
                {"eps_start", t.eps_start},
                {"eps_end", t.eps_end},
                {"eps_decay_frac", t.eps_decay_frac},
                {"clip_norm", t.clip_norm},
                {"hidden", t.hidden},
                {"split_mode", t.split_mode},
                {"eval_every", t.eval_every},
                {"eval_episodes", t.eval_episodes},
                {"eval_seed", t.eval_seed}};
  j["introspect"] = {{"p", c.introspect.p}, {"n", c.introspect.n}, {"lo", c.introspect.lo}, {"hi", c.introspect.hi}};
  return j;
}

std::string config_hash(const RunConfig &config)
{
  json j = to_json(config);
  j.erase("out_dir");
  j.erase("model");
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump())
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

env::EnvConfig env_config(const RunConfig &c)
{
  env::EnvConfig e;
  e.gamma_c = c.gamma_c;
  e.barrier = env::parse_barrier(c.barrier);
  e.max_cells = c.max_cells;
  e.n_initial_cells = c.resolved_initial_cells();
  e.episode_len = c.episode_len;
  e.overrun_penalty = c.overrun_penalty;
  e.init = env::parse_init_mode(c.init);
  e.do_nothing_patience = c.do_nothing_patience;
  e.unsteady_step_prob = c.unsteady_step_prob;
  return e;
}

rl::TrainConfig train_config(const RunConfig &c)
{
  rl::TrainConfig t = c.train;
  t.seed = c.seed;
  return t;
}

}  // namespace drlamr::app
