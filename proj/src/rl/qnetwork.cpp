// SPDX-License-Identifier: Apache-2.0

#include "drlamr/rl/qnetwork.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"

namespace drlamr::rl
{

QNetwork::QNetwork(std::vector<int> dims) : dims_(std::move(dims))
{
  if (dims_.size() < 2)
  {
    throw DimensionMismatch("QNetwork needs at least an input and an output size");
  }
  for (int d : dims_)
  {
    if (d < 1)
    {
      throw DimensionMismatch("QNetwork layer sizes must be positive");
    }
  }
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l)
  {
    W.push_back(Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]));
    b.push_back(Eigen::VectorXd::Zero(dims_[l + 1]));
  }
}

void QNetwork::initialize(std::mt19937_64 &rng)
{
  for (std::size_t l = 0; l < W.size(); ++l)
  {
    const double bound = std::sqrt(6.0 / static_cast<double>(W[l].cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index j = 0; j < W[l].cols(); ++j)
    {
      for (Eigen::Index i = 0; i < W[l].rows(); ++i)
      {
        W[l](i, j) = dist(rng);
      }
    }
    b[l].setZero();
  }
}

std::size_t QNetwork::n_params() const
{
  std::size_t n = 0;
  for (std::size_t l = 0; l < W.size(); ++l)
  {
    n += W[l].size() + b[l].size();
  }
  return n;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd &obs) const
{
  if (obs.rows() != obs_dim())
  {
    throw DimensionMismatch("QNetwork: observation has " + std::to_string(obs.rows()) + " entries, expected " +
                            std::to_string(obs_dim()));
  }
  Eigen::MatrixXd a = obs;
  for (std::size_t l = 0; l < W.size(); ++l)
  {
    Eigen::MatrixXd z = W[l] * a;
    z.colwise() += b[l];
    a = l + 1 < W.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd &obs) const { return forward_batch(obs); }

Eigen::VectorXd QNetwork::forward(const std::vector<double> &obs) const
{
  return forward(Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size())).eval());
}

int QNetwork::argmax(const Eigen::VectorXd &q)
{
  int best = 0;
  for (int i = 1; i < q.size(); ++i)
  {
    if (q[i] > q[best])
    {
      best = i;
    }
  }
  return best;
}

double Gradients::norm() const
{
  double s = 0.0;
  for (const auto &w : W)
  {
    s += w.squaredNorm();
  }
  for (const auto &v : b)
  {
    s += v.squaredNorm();
  }
  return std::sqrt(s);
}

void Gradients::scale(double s)
{
  for (auto &w : W)
  {
    w *= s;
  }
  for (auto &v : b)
  {
    v *= s;
  }
}

BackwardResult backward(const QNetwork &net, const Eigen::MatrixXd &obs, const std::vector<int> &actions,
                        const Eigen::VectorXd &targets, double clip_norm)
{
  const Eigen::Index batch = obs.cols();
  if (batch == 0 || static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch)
  {
    throw DimensionMismatch("backward: batch, actions and targets must have the same nonzero length");
  }
  if (obs.rows() != net.obs_dim())
  {
    throw DimensionMismatch("backward: observation size differs from the network input");
  }
  const int L = net.n_layers();
  std::vector<Eigen::MatrixXd> acts(L + 1), pre(L);
  acts[0] = obs;
  for (int l = 0; l < L; ++l)
  {
    pre[l] = net.W[l] * acts[l];
    pre[l].colwise() += net.b[l];
    acts[l + 1] = l + 1 < L ? Eigen::MatrixXd(pre[l].cwiseMax(0.0)) : pre[l];
  }

  BackwardResult out;
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(net.n_actions(), batch);
  for (Eigen::Index i = 0; i < batch; ++i)
  {
    const int a = actions[i];
    if (a < 0 || a >= net.n_actions())
    {
      throw DimensionMismatch("backward: action index out of range");
    }
    const double r = acts[L](a, i) - targets[i];
    out.loss += r * r;
    delta(a, i) = 2.0 * r / static_cast<double>(batch);
  }
  out.loss /= static_cast<double>(batch);

  out.grads.W.resize(L);
  out.grads.b.resize(L);
  for (int l = L - 1; l >= 0; --l)
  {
    out.grads.W[l] = delta * acts[l].transpose();
    out.grads.b[l] = delta.rowwise().sum();
    if (l > 0)
    {
      delta = (net.W[l].transpose() * delta).cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  out.grad_norm = out.grads.norm();
  if (out.grad_norm > clip_norm)
  {
    out.grads.scale(clip_norm / out.grad_norm);
  }
  return out;
}

Adam::Adam(const QNetwork &net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps)
{
  for (int l = 0; l < net.n_layers(); ++l)
  {
    m_.W.push_back(Eigen::MatrixXd::Zero(net.W[l].rows(), net.W[l].cols()));
    m_.b.push_back(Eigen::VectorXd::Zero(net.b[l].size()));
  }
  v_ = m_;
}

void Adam::step(QNetwork &net, const Gradients &g)
{
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](auto &param, auto &m, auto &v, const auto &grad) {
    m = beta1_ * m + (1.0 - beta1_) * grad;
    v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
    param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  for (int l = 0; l < net.n_layers(); ++l)
  {
    update(net.W[l], m_.W[l], v_.W[l], g.W[l]);
    update(net.b[l], m_.b[l], v_.b[l], g.b[l]);
  }
}

nlohmann::json to_json(const QNetwork &net, const ModelMeta &meta)
{
  nlohmann::json j;
  j["format"] = "drlamr-qnetwork";
  j["version"] = kModelFormatVersion;
  j["dims"] = net.dims();
  j["weights"] = nlohmann::json::array();
  j["biases"] = nlohmann::json::array();
  for (int l = 0; l < net.n_layers(); ++l)
  {
    std::vector<double> w;
    w.reserve(net.W[l].size());
    for (Eigen::Index r = 0; r < net.W[l].rows(); ++r)
    {
      for (Eigen::Index c = 0; c < net.W[l].cols(); ++c)
      {
        w.push_back(net.W[l](r, c));
      }
    }
    j["weights"].push_back(w);
    j["biases"].push_back(std::vector<double>(net.b[l].data(), net.b[l].data() + net.b[l].size()));
  }
  j["meta"] = {{"obs_layout", meta.obs_layout}, {"split_mode", meta.split_mode}, {"case", meta.case_name},
               {"barrier", meta.barrier},       {"max_cells", meta.max_cells},   {"gamma_c", meta.gamma_c},
               {"config_hash", meta.config_hash}};
  return j;
}

QNetwork from_json(const nlohmann::json &j, ModelMeta *meta)
{
  try
  {
    if (j.at("format").get<std::string>() != "drlamr-qnetwork")
    {
      throw FormatError("model: unknown format tag");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
    {
      throw FormatError("model: format version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    QNetwork net(j.at("dims").get<std::vector<int>>());
    const auto &ws = j.at("weights");
    const auto &bs = j.at("biases");
    if (ws.size() != static_cast<std::size_t>(net.n_layers()) || bs.size() != ws.size())
    {
      throw FormatError("model: layer count does not match dims");
    }
    for (int l = 0; l < net.n_layers(); ++l)
    {
      const auto w = ws[l].get<std::vector<double>>();
      const auto bv = bs[l].get<std::vector<double>>();
      if (w.size() != static_cast<std::size_t>(net.W[l].size()) || bv.size() != static_cast<std::size_t>(net.b[l].size()))
      {
        throw FormatError("model: layer " + std::to_string(l) + " has the wrong number of parameters");
      }
      for (Eigen::Index r = 0; r < net.W[l].rows(); ++r)
      {
        for (Eigen::Index c = 0; c < net.W[l].cols(); ++c)
        {
          net.W[l](r, c) = w[r * net.W[l].cols() + c];
        }
      }
      for (Eigen::Index r = 0; r < net.b[l].size(); ++r)
      {
        net.b[l][r] = bv[r];
      }
    }
    if (meta)
    {
      const auto &m = j.at("meta");
      meta->obs_layout = m.at("obs_layout").get<std::vector<std::string>>();
      meta->split_mode = m.at("split_mode").get<bool>();
      meta->case_name = m.at("case").get<std::string>();
      meta->barrier = m.at("barrier").get<std::string>();
      meta->max_cells = m.at("max_cells").get<int>();
      meta->gamma_c = m.at("gamma_c").get<double>();
      meta->config_hash = m.at("config_hash").get<std::string>();
      if (meta->obs_layout.size() != static_cast<std::size_t>(net.obs_dim()))
      {
        throw FormatError("model: observation layout length differs from the input size");
      }
    }
    return net;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw FormatError(std::string("model: ") + e.what());
  }
  catch (const DimensionMismatch &e)
  {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void save_model(const std::string &path, const QNetwork &net, const ModelMeta &meta)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot write model file " + path);
  }
  out << to_json(net, meta).dump(1) << '\n';
}

QNetwork load_model(const std::string &path, ModelMeta *meta)
{
  std::ifstream in(path);
  if (!in)
  {
    throw FormatError("cannot read model file " + path);
  }
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(in);
  }
  catch (const nlohmann::json::exception &e)
  {
    throw FormatError("model file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j, meta);
}

}  // namespace drlamr::rl
