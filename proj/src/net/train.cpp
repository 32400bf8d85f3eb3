// Copyright 2026 The dvs_pursuit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pursuit/net/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pursuit/error.hpp"

namespace pursuit::net {

void TrainConfig::validate() const
{
  if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
  if (!(clip_norm >= 0.0)) throw ConfigError("clip norm must be non-negative");
}

Trainer::Trainer(Network& net, TrainConfig config)
  : net_(net), config_(config), lr_(config.learning_rate),
    grads_(net.make_gradients()), velocity_(net.make_gradients())
{
  config_.validate();
}

double Trainer::loss_and_gradients(std::span<const Example> batch, Gradients& grads)
{
  grads.zero();
  if (batch.empty()) return 0.0;
  const auto& layers = net_.layers();
  const int softmax_at = static_cast<int>(layers.size()) - 1;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;

  Tensor grad_logits;
  for (const auto& ex : batch) {
    if (ex.label < 0 || ex.label >= net_.architecture().classes) {
      throw Error("training label " + std::to_string(ex.label) + " out of range");
    }
    net_.forward(frame_to_tensor(*ex.frame), ws_);
    const Tensor& probs = ws_.acts.back();
    grad_logits.reshape(probs.channels, 1, 1);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      const double target = ex.target ? (*ex.target)[k] : (static_cast<int>(k) == ex.label ? 1.0 : 0.0);
      if (target > 0.0) loss -= target * std::log(std::max(probs.data[k], 1e-300));
      grad_logits.data[k] = (probs.data[k] - target) * scale;
    }
    // Softmax and cross-entropy are differentiated together.
    net_.backward(ws_, softmax_at - 1, grad_logits, &grads, false, false);
  }
  return loss * scale;
}

double Trainer::step(std::span<const Example> batch)
{
  const double loss = loss_and_gradients(batch, grads_);
  if (!std::isfinite(loss)) throw DivergenceError("training loss is not finite");

  double g_scale = 1.0;
  if (config_.clip_norm > 0.0) {
    double sq = 0.0;
    for (const auto* set : {&grads_.weights, &grads_.biases}) {
      for (const auto& g : *set) {
        for (double v : g) sq += v * v;
      }
    }
    const double norm = std::sqrt(sq);
    if (norm > config_.clip_norm) g_scale = config_.clip_norm / norm;
  }

  auto& layers = net_.layers();
  const double mu = config_.momentum;
  const double wd = config_.weight_decay;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& w = layers[i].weights;
    auto& vw = velocity_.weights[i];
    const auto& gw = grads_.weights[i];
    for (std::size_t k = 0; k < w.size(); ++k) {
      vw[k] = mu * vw[k] - lr_ * (g_scale * gw[k] + wd * w[k]);
      w[k] += vw[k];
    }
    auto& b = layers[i].biases;
    auto& vb = velocity_.biases[i];
    const auto& gb = grads_.biases[i];
    for (std::size_t k = 0; k < b.size(); ++k) {
      vb[k] = mu * vb[k] - lr_ * g_scale * gb[k];
      b[k] += vb[k];
    }
  }
  return loss;
}

double train_step(Network& net, std::span<const Example> batch, const TrainConfig& config)
{
  Trainer t(net, config);
  return t.step(batch);
}

FitReport fit(Network& net, std::span<const Example> data, const TrainConfig& config, const EpochCallback& on_epoch)
{
  config.validate();
  Trainer trainer(net, config);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const int decay_epoch = static_cast<int>(std::floor(config.decay_at * config.epochs));

  FitReport report;
  std::vector<Example> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (epoch == decay_epoch && epoch > 0) trainer.set_learning_rate(trainer.learning_rate() * config.decay_factor);
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      total += trainer.step(batch) * static_cast<double>(batch.size());
      n += batch.size();
    }
    const double mean = n ? total / static_cast<double>(n) : 0.0;
    report.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return report;
}

double accuracy(const Network& net, std::span<const Example> data)
{
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data) {
    if (net.forward(*ex.frame).argmax() == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace pursuit::net
