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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pursuit/class_outputs.hpp"
#include "pursuit/events/frame.hpp"
#include "pursuit/net/network.hpp"

namespace pursuit::net {

struct TrainConfig
{
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 64;
  int epochs = 10;
  std::uint64_t seed = 1;
  double init_scale = 1.0;
  // Learning rate is multiplied by decay_factor once decay_at of the epochs
  // have run.
  double decay_at = 2.0 / 3.0;
  double decay_factor = 0.1;
  double weight_decay = 0.0;
  // Batch gradients with a larger global L2 norm are rescaled to it; 0
  // disables clipping. Without it, long runs occasionally blow up and
  // kill every ReLU.
  double clip_norm = 1.0;

  void validate() const;
};

// A training sample. `target`, when set, replaces the one-hot label as the
// cross-entropy target distribution.
struct Example
{
  const events::Frame* frame = nullptr;
  int label = 0;
  const ClassOutputs* target = nullptr;
};

// Momentum SGD on softmax cross-entropy. Holds the velocity buffers, so
// consecutive steps share momentum.
class Trainer
{
public:
  Trainer(Network& net, TrainConfig config);

  // Mean batch loss measured before the update. Throws DivergenceError on a
  // non-finite loss, leaving the weights untouched.
  double step(std::span<const Example> batch);

  // Loss and parameter gradients (batch mean) without updating.
  double loss_and_gradients(std::span<const Example> batch, Gradients& grads);

  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

private:
  Network& net_;
  TrainConfig config_;
  double lr_;
  Gradients grads_;
  Gradients velocity_;
  Workspace ws_;
};

// One momentum-free step (fresh velocity).
double train_step(Network& net, std::span<const Example> batch, const TrainConfig& config);

struct FitReport
{
  std::vector<double> epoch_loss;
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

// Shuffled mini-batch training for config.epochs epochs.
FitReport fit(Network& net, std::span<const Example> data, const TrainConfig& config,
              const EpochCallback& on_epoch = {});

double accuracy(const Network& net, std::span<const Example> data);

}  // namespace pursuit::net
