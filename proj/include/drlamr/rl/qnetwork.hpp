// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace drlamr::rl
{

// Fully connected net, ReLU between layers and a linear output layer.
// dims = {obs_dim, hidden..., n_actions}; {obs_dim, n_actions} is linear.
class QNetwork
{
public:
  QNetwork() = default;
  explicit QNetwork(std::vector<int> dims);

  // He-uniform weights, zero biases.
  void initialize(std::mt19937_64 &rng);

  Eigen::VectorXd forward(const Eigen::VectorXd &obs) const;
  Eigen::VectorXd forward(const std::vector<double> &obs) const;
  // One sample per column.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd &obs) const;

  // argmax with ties to the lowest index
  static int argmax(const Eigen::VectorXd &q);
  int act(const std::vector<double> &obs) const { return argmax(forward(obs)); }

  const std::vector<int> &dims() const { return dims_; }
  int obs_dim() const { return dims_.front(); }
  int n_actions() const { return dims_.back(); }
  int n_layers() const { return static_cast<int>(W.size()); }
  std::size_t n_params() const;

  std::vector<Eigen::MatrixXd> W;  // W[l] is dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> b;

private:
  std::vector<int> dims_;
};

struct Gradients
{
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;
  double norm() const;
  void scale(double s);
};

struct BackwardResult
{
  double loss = 0.0;  // mean over the batch of (q(s, a) - y)^2
  Gradients grads;
  double grad_norm = 0.0;  // before clipping
};

// Gradient of the mean squared TD error. Gradients whose global norm exceeds
// `clip_norm` are rescaled to that norm.
BackwardResult backward(const QNetwork &net, const Eigen::MatrixXd &obs, const std::vector<int> &actions,
                        const Eigen::VectorXd &targets, double clip_norm = 10.0);

class Adam
{
public:
  Adam() = default;
  Adam(const QNetwork &net, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(QNetwork &net, const Gradients &g);
  long steps() const { return t_; }

private:
  double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  Gradients m_, v_;
};

struct ModelMeta
{
  std::vector<std::string> obs_layout;
  bool split_mode = false;
  std::string case_name;
  std::string barrier;
  int max_cells = 0;
  double gamma_c = 0.0;
  std::string config_hash;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const QNetwork &net, const ModelMeta &meta);
// Throws FormatError on malformed documents or a version mismatch.
QNetwork from_json(const nlohmann::json &j, ModelMeta *meta = nullptr);

void save_model(const std::string &path, const QNetwork &net, const ModelMeta &meta);
QNetwork load_model(const std::string &path, ModelMeta *meta = nullptr);

}  // namespace drlamr::rl
