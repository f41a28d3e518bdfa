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

#include "qasdon/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qasdon/parallel.hpp"

namespace qasdon {
namespace {

void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  if (a.empty()) throw std::invalid_argument("empty input");
}

void check_model_fits(const OperatorModel& model, std::span<const Sample> samples) {
  for (const Sample& s : samples) {
    if (s.sensors.size() != model.branch.input_dim) {
      throw std::invalid_argument("dataset has " + std::to_string(s.sensors.size()) +
                                  " sensors, model expects " +
                                  std::to_string(model.branch.input_dim));
    }
  }
  if (model.trunk.layer.in_dim() != 3) {
    throw std::invalid_argument("trunk must take (x, y, t) queries");
  }
}

// Draws k distinct indices from [0, n) by partial Fisher-Yates.
std::vector<std::size_t> draw_distinct(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

void TrainConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (!(lr0 > 0)) bad("lr", "must be positive");
  if (schedule.empty()) bad("schedule", "needs at least one stage");
  if (schedule.front().start_fraction != 0.0) bad("schedule", "first stage must start at 0");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i].start_fraction > schedule[i - 1].start_fraction)) {
      bad("schedule", "stage fractions must be strictly increasing");
    }
  }
  for (const Stage& s : schedule) {
    if (!(s.multiplier > 0)) bad("schedule", "multipliers must be positive");
  }
  if (epochs < 0) bad("epochs", "must be >= 0");
  if (eval_every < 1) bad("eval_every", "must be >= 1");
  if (batch_size < 1) bad("batch_size", "must be >= 1");
  if (queries_per_sample < 0) bad("queries_per_step", "must be >= 0");
}

std::vector<Stage> parse_schedule(const std::string& text) {
  std::vector<Stage> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("config field 'schedule': expected fraction:multiplier");
    }
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("config field 'schedule': bad number in '" + item + "'");
    }
  }
  return out;
}

std::string format_schedule(const std::vector<Stage>& schedule) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i) os << ',';
    os << schedule[i].start_fraction << ':' << schedule[i].multiplier;
  }
  return os.str();
}

double lr_at(const TrainConfig& config, int epoch) {
  if (epoch < 0 || epoch >= config.epochs) {
    throw std::out_of_range("epoch " + std::to_string(epoch) + " outside [0, " +
                            std::to_string(config.epochs) + ")");
  }
  const double fraction = static_cast<double>(epoch) / config.epochs;
  double mult = config.schedule.front().multiplier;
  for (const Stage& s : config.schedule) {
    if (fraction >= s.start_fraction) mult = s.multiplier;
  }
  return config.lr0 * mult;
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
  check_same_length(pred, target);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

double relative_l2(std::span<const double> pred, std::span<const double> target) {
  check_same_length(pred, target);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    num += d * d;
    den += target[i] * target[i];
  }
  if (den == 0.0) throw std::invalid_argument("relative L2 of a zero-norm target");
  return std::sqrt(num / den);
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double lr) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("Adam: parameter, gradient and moment lengths differ");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

LossAndGrad loss_and_gradient(const OperatorModel& model,
                              std::span<const Sample> samples,
                              std::span<const BatchItem> batch, int threads) {
  check_model_fits(model, samples);
  std::size_t total = 0;
  for (const BatchItem& item : batch) {
    if (item.sample >= samples.size()) throw std::out_of_range("batch sample index");
    total += item.queries.empty() ? samples[item.sample].queries.size()
                                  : item.queries.size();
  }
  if (total == 0) throw std::invalid_argument("empty batch");
  const double scale = 2.0 / static_cast<double>(total);

  std::vector<ModelGrad> grads(batch.size());
  std::vector<double> sq_err(batch.size(), 0.0);
  parallel_for(batch.size(), threads, [&](std::size_t bi) {
    const BatchItem& item = batch[bi];
    const Sample& s = samples[item.sample];
    ModelGrad g = zeros_like(model);
    const BranchForward b = branch_forward(model.branch, s.sensors);
    std::vector<double> d_b(b.b.size(), 0.0);
    std::vector<double> d_t(b.b.size());
    double err = 0.0;
    const std::size_t nq = item.queries.empty() ? s.queries.size() : item.queries.size();
    for (std::size_t k = 0; k < nq; ++k) {
      const std::size_t q = item.queries.empty() ? k : item.queries[k];
      const HybridForward t = trunk_forward(model.trunk, s.queries.at(q));
      const double diff = inner_product(b.b, t.output) - s.targets.at(q);
      err += diff * diff;
      const double d_pred = scale * diff;
      for (std::size_t j = 0; j < d_b.size(); ++j) {
        d_b[j] += d_pred * t.output[j];
        d_t[j] = d_pred * b.b[j];
      }
      hybrid_backward_accumulate(model.trunk.layer, t.tape, d_t, g.trunk);
    }
    branch_backward(model.branch, b.tape, d_b, g);
    grads[bi] = std::move(g);
    sq_err[bi] = err;
  });

  LossAndGrad out{0.0, zeros_like(model)};
  double err = 0.0;
  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    add_into(out.grad, grads[bi]);
    err += sq_err[bi];
  }
  out.loss = err / static_cast<double>(total);
  return out;
}

std::vector<std::vector<double>> predict_samples(const OperatorModel& model,
                                                 std::span<const Sample> samples,
                                                 int threads) {
  check_model_fits(model, samples);
  std::vector<std::vector<double>> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const Sample& s = samples[i];
    const BranchForward b = branch_forward(model.branch, s.sensors);
    out[i].reserve(s.queries.size());
    for (const Query& q : s.queries) {
      out[i].push_back(inner_product(b.b, trunk_forward(model.trunk, q).output));
    }
  });
  return out;
}

EvalMetrics evaluate(const OperatorModel& model, std::span<const Sample> samples,
                     int threads) {
  const auto preds = predict_samples(model, samples, threads);
  std::vector<double> p, t;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    p.insert(p.end(), preds[i].begin(), preds[i].end());
    t.insert(t.end(), samples[i].targets.begin(), samples[i].targets.end());
  }
  return {mse_loss(p, t), relative_l2(p, t)};
}

TrainResult train(OperatorModel& model, const Dataset& dataset,
                  const TrainConfig& config, const EvalCallback& on_eval) {
  config.validate();
  const auto train_set = dataset.train();
  const auto test_set = dataset.test();
  if (train_set.empty()) throw std::invalid_argument("training split is empty");
  check_model_fits(model, dataset.samples);

  TrainResult result;
  if (config.epochs == 0) return result;

  Rng batch_rng = make_stream(config.seed, "batch");
  std::vector<double> params = flatten_parameters(model);
  AdamState adam(params.size());

  auto log_row = [&](int epoch, double lr) {
    LogRow row;
    row.epoch = epoch;
    row.lr = lr;
    row.train_loss = evaluate(model, train_set, config.threads).mse;
    row.test_rel_l2 = test_set.empty() ? std::nan("")
                                       : evaluate(model, test_set, config.threads).relative_l2;
    if (!std::isfinite(row.train_loss)) {
      throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch));
    }
    result.log.push_back(row);
    if (on_eval) on_eval(row, model);
  };

  const std::size_t n_train = train_set.size();
  std::vector<BatchItem> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at(config, epoch);
    if (epoch % config.eval_every == 0) log_row(epoch, lr);

    batch.clear();
    for (std::size_t s : draw_distinct(n_train, config.batch_size, batch_rng)) {
      BatchItem item{s, {}};
      const std::size_t nq = train_set[s].queries.size();
      if (config.queries_per_sample > 0 &&
          static_cast<std::size_t>(config.queries_per_sample) < nq) {
        item.queries = draw_distinct(nq, config.queries_per_sample, batch_rng);
      }
      batch.push_back(std::move(item));
    }
    LossAndGrad lg = loss_and_gradient(model, train_set, batch, config.threads);
    if (!std::isfinite(lg.loss)) {
      throw TrainingError("non-finite loss at epoch " + std::to_string(epoch));
    }
    const std::vector<double> g = flatten(lg.grad);
    adam_step(adam, params, g, lr);
    assign_parameters(model, params);
  }
  log_row(config.epochs, lr_at(config, config.epochs - 1));
  return result;
}

}  // namespace qasdon
