// Copyright 2026 The qasdon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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
#include <stdexcept>
#include <string>
#include <vector>

#include "qasdon/operator_net.hpp"
#include "qasdon/pde_data.hpp"

namespace qasdon {

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-constant learning-rate stage starting at a fraction of the run.
struct Stage {
  double start_fraction = 0.0;
  double multiplier = 1.0;
};

struct TrainConfig {
  double lr0 = 0.002;
  std::vector<Stage> schedule = {{0.0, 1.0}, {1.0 / 3.0, 0.5}, {2.0 / 3.0, 0.1}};
  int epochs = 60000;  // one optimizer step per epoch
  int eval_every = 500;
  int batch_size = 128;         // samples per step
  int queries_per_sample = 0;   // queries drawn per sample and step; 0 = all
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

// "0:1,0.333:0.5,0.667:0.1"
std::vector<Stage> parse_schedule(const std::string& text);
std::string format_schedule(const std::vector<Stage>& schedule);

double lr_at(const TrainConfig& config, int epoch);

double mse_loss(std::span<const double> pred, std::span<const double> target);
// ||pred - target|| / ||target||
double relative_l2(std::span<const double> pred, std::span<const double> target);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double lr);

// Which queries of which samples enter one loss evaluation.
struct BatchItem {
  std::size_t sample = 0;
  std::vector<std::size_t> queries;  // empty = every query of the sample
};

struct LossAndGrad {
  double loss = 0.0;  // mean squared error over all selected queries
  ModelGrad grad;
};

// Per-sample work runs in parallel; the reduction order is fixed, so the
// result is bit-identical for any thread count.
LossAndGrad loss_and_gradient(const OperatorModel& model,
                              std::span<const Sample> samples,
                              std::span<const BatchItem> batch, int threads = 1);

// Predictions for every query of every sample, in order.
std::vector<std::vector<double>> predict_samples(const OperatorModel& model,
                                                 std::span<const Sample> samples,
                                                 int threads = 1);

struct EvalMetrics {
  double mse = 0.0;
  double relative_l2 = 0.0;  // over all queries of all samples pooled
};

EvalMetrics evaluate(const OperatorModel& model, std::span<const Sample> samples,
                     int threads = 1);

struct LogRow {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double test_rel_l2 = 0.0;
};

struct TrainResult {
  std::vector<LogRow> log;
};

// Called after each log row is appended, e.g. to write a checkpoint.
using EvalCallback = std::function<void(const LogRow&, const OperatorModel&)>;

// Runs config.epochs Adam steps on mini-batches of dataset.train(). Rows are
// logged before steps 0, eval_every, 2*eval_every, ... and after the last step.
TrainResult train(OperatorModel& model, const Dataset& dataset,
                  const TrainConfig& config, const EvalCallback& on_eval = {});

}  // namespace qasdon
