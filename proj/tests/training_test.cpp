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

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace qasdon {
namespace {

DataConfig tiny_data() {
  DataConfig c;
  c.grf.grid = 8;
  c.sensors_per_side = 2;
  c.queries = 5;
  c.time_slices = 3;
  c.n_train = 4;
  c.n_test = 2;
  c.seed = 7;
  return c;
}

ModelConfig tiny_model() {
  ModelConfig c;
  c.qubits = 2;
  c.depth = 1;
  c.hidden = 3;
  c.subnets = 2;
  c.sensors = 4;
  c.latent = 4;
  return c;
}

OperatorModel init_model(const ModelConfig& c, std::uint64_t seed) {
  OperatorModel m = make_model(c);
  Rng rng(seed);
  initialize(m, rng);
  std::uniform_real_distribution<double> d(-1, 1);
  for (double& w : m.branch.gate.w) w = d(rng);
  return m;
}

TEST(MseLoss, Examples) {
  const std::vector<double> t = {1, -2, 3.5};
  EXPECT_EQ(mse_loss(t, t), 0.0);
  const std::vector<double> p = {2, -1, 4.5};
  EXPECT_EQ(mse_loss(p, t), 1.0);
  std::mt19937_64 rng(1);
  const auto a = oracle::uniform_vector(7, -1, 1, rng);
  const auto b = oracle::uniform_vector(7, -1, 1, rng);
  double s = 0;
  for (int i = 0; i < 7; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  EXPECT_NEAR(mse_loss(a, b), s / 7, 1e-15);
  EXPECT_THROW(mse_loss(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(mse_loss(a, t), std::invalid_argument);
}

TEST(RelativeL2, Examples) {
  const std::vector<double> t = {3, -4, 1};
  EXPECT_EQ(relative_l2(t, t), 0.0);
  EXPECT_EQ(relative_l2(std::vector<double>(3, 0.0), t), 1.0);
  const std::vector<double> p = {3.03, -4.04, 1.01};
  EXPECT_NEAR(relative_l2(p, t), 0.01, 1e-14);
  EXPECT_THROW(relative_l2(t, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(AdamStep, ZeroGradientLeavesParameters) {
  std::vector<double> p = {1.0, -2.0, 0.5};
  const auto before = p;
  AdamState s(3);
  adam_step(s, p, std::vector<double>(3, 0.0), 0.002);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step, 1);
}

TEST(AdamStep, FirstStepMagnitudeIsLearningRate) {
  std::vector<double> p = {0.0};
  AdamState s(1);
  adam_step(s, p, std::vector<double>{1.0}, 0.002);
  EXPECT_NEAR(p[0], -0.002 * 1.0 / (1.0 + 1e-8), 1e-15);
}

TEST(AdamStep, MatchesHandEvaluatedSecondStep) {
  std::vector<double> p = {0.0};
  AdamState s(1);
  adam_step(s, p, std::vector<double>{1.0}, 0.1);
  adam_step(s, p, std::vector<double>{-2.0}, 0.1);
  const double m = 0.9 * 0.1 + 0.1 * -2.0;
  const double v = 0.999 * 0.001 + 0.001 * 4.0;
  const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
  EXPECT_NEAR(p[0], -0.1 / (1 + 1e-8) - 0.1 * mh / (std::sqrt(vh) + 1e-8), 1e-14);
}

TEST(AdamStep, LengthMismatch) {
  std::vector<double> p(3, 0.0);
  AdamState s(2);
  EXPECT_THROW(adam_step(s, p, std::vector<double>(3, 0.0), 0.1), std::invalid_argument);
}

TEST(LrAt, DefaultSchedule) {
  TrainConfig c;
  c.epochs = 60000;
  EXPECT_DOUBLE_EQ(lr_at(c, 0), 0.002);
  EXPECT_DOUBLE_EQ(lr_at(c, 30000), 0.001);
  EXPECT_DOUBLE_EQ(lr_at(c, 59999), 0.0002);
  EXPECT_DOUBLE_EQ(lr_at(c, 19999), 0.002);
  EXPECT_DOUBLE_EQ(lr_at(c, 20000), 0.001);
  EXPECT_DOUBLE_EQ(lr_at(c, 40000), 0.0002);
  EXPECT_THROW(lr_at(c, -1), std::out_of_range);
  EXPECT_THROW(lr_at(c, 60000), std::out_of_range);
}

TEST(Schedule, ParseFormatAndValidate) {
  const auto s = parse_schedule("0:1,0.5:0.25");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].start_fraction, 0.5);
  EXPECT_EQ(s[1].multiplier, 0.25);
  EXPECT_EQ(parse_schedule(format_schedule(TrainConfig{}.schedule)).size(), 3u);
  EXPECT_EQ(parse_schedule(format_schedule(TrainConfig{}.schedule))[1].start_fraction,
            1.0 / 3.0);
  EXPECT_THROW(parse_schedule("0-1"), std::invalid_argument);
  EXPECT_THROW(parse_schedule("0:x"), std::invalid_argument);
  TrainConfig c;
  c.schedule = parse_schedule("0.1:1");
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.schedule = parse_schedule("0:1,0.5:0.5,0.5:0.1");
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(LossAndGradient, MatchesFiniteDifferencesOfTotalLoss) {
  const Dataset ds = build_dataset(tiny_data());
  OperatorModel m = init_model(tiny_model(), 3);
  const auto train = ds.train();
  std::vector<BatchItem> batch = {{0, {}}, {2, {1, 3}}, {3, {}}};
  const LossAndGrad lg = loss_and_gradient(m, train, batch);
  const auto grad = flatten(lg.grad);
  auto params = flatten_parameters(m);
  ASSERT_EQ(grad.size(), params.size());
  int checked = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double fd = oracle::central_diff(
        [&](std::vector<double>& p) {
          OperatorModel mm = m;
          assign_parameters(mm, p);
          return loss_and_gradient(mm, train, batch).loss;
        },
        params, i);
    EXPECT_TRUE(oracle::grad_close(grad[i], fd, 1e-4, 1e-9))
        << "param " << i << " analytic=" << grad[i] << " fd=" << fd;
    ++checked;
  }
  EXPECT_EQ(checked, static_cast<int>(count_parameters(m).total));
}

TEST(LossAndGradient, LossIsMseOverSelectedQueries) {
  const Dataset ds = build_dataset(tiny_data());
  const OperatorModel m = init_model(tiny_model(), 4);
  const auto train = ds.train();
  const std::vector<BatchItem> batch = {{1, {0, 4}}, {2, {}}};
  std::vector<double> p, t;
  for (std::size_t q : {0u, 4u}) {
    p.push_back(predict(m, train[1].sensors, train[1].queries[q]));
    t.push_back(train[1].targets[q]);
  }
  for (std::size_t q = 0; q < 5; ++q) {
    p.push_back(predict(m, train[2].sensors, train[2].queries[q]));
    t.push_back(train[2].targets[q]);
  }
  EXPECT_NEAR(loss_and_gradient(m, train, batch).loss, mse_loss(p, t), 1e-15);
  EXPECT_THROW(loss_and_gradient(m, train, std::vector<BatchItem>{{9, {}}}),
               std::out_of_range);
}

TEST(LossAndGradient, ThreadCountDoesNotChangeBits) {
  const Dataset ds = build_dataset(tiny_data());
  const OperatorModel m = init_model(tiny_model(), 5);
  const std::vector<BatchItem> batch = {{0, {}}, {1, {}}, {2, {}}, {3, {}}};
  const auto a = loss_and_gradient(m, ds.train(), batch, 1);
  const auto b = loss_and_gradient(m, ds.train(), batch, 3);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(flatten(a.grad), flatten(b.grad));
}

TEST(LossAndGradient, RejectsMismatchedModel) {
  const Dataset ds = build_dataset(tiny_data());
  ModelConfig c = tiny_model();
  c.sensors = 8;
  const OperatorModel m = make_model(c);
  EXPECT_THROW(loss_and_gradient(m, ds.train(), std::vector<BatchItem>{{0, {}}}),
               std::invalid_argument);
}

TEST(Evaluate, PooledRelativeL2) {
  const Dataset ds = build_dataset(tiny_data());
  const OperatorModel m = init_model(tiny_model(), 6);
  const auto preds = predict_samples(m, ds.test());
  std::vector<double> p, t;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    p.insert(p.end(), preds[i].begin(), preds[i].end());
    t.insert(t.end(), ds.test()[i].targets.begin(), ds.test()[i].targets.end());
  }
  const EvalMetrics e = evaluate(m, ds.test());
  EXPECT_EQ(e.relative_l2, relative_l2(p, t));
  EXPECT_EQ(e.mse, mse_loss(p, t));
}

TEST(Train, ZeroEpochsLeavesModelUnchanged) {
  const Dataset ds = build_dataset(tiny_data());
  OperatorModel m = init_model(tiny_model(), 7);
  const auto before = flatten_parameters(m);
  TrainConfig c;
  c.epochs = 0;
  const TrainResult r = train(m, ds, c);
  EXPECT_TRUE(r.log.empty());
  EXPECT_EQ(flatten_parameters(m), before);
}

TEST(Train, OneStepUpdatesEveryCountedParameter) {
  const Dataset ds = build_dataset(tiny_data());
  OperatorModel m = init_model(tiny_model(), 8);
  const auto before = flatten_parameters(m);
  TrainConfig c;
  c.epochs = 1;
  c.batch_size = 4;
  train(m, ds, c);
  const auto after = flatten_parameters(m);
  ASSERT_EQ(after.size(), count_parameters(m).total);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < after.size(); ++i) changed += after[i] != before[i];
  EXPECT_EQ(changed, count_parameters(m).total);
}

TEST(Train, LogRowsFollowEvalInterval) {
  const Dataset ds = build_dataset(tiny_data());
  OperatorModel m = init_model(tiny_model(), 9);
  TrainConfig c;
  c.epochs = 7;
  c.eval_every = 3;
  c.batch_size = 2;
  int callbacks = 0;
  const TrainResult r = train(m, ds, c, [&](const LogRow&, const OperatorModel&) {
    ++callbacks;
  });
  ASSERT_EQ(r.log.size(), 4u);
  EXPECT_EQ(r.log[0].epoch, 0);
  EXPECT_EQ(r.log[1].epoch, 3);
  EXPECT_EQ(r.log[2].epoch, 6);
  EXPECT_EQ(r.log[3].epoch, 7);
  EXPECT_EQ(callbacks, 4);
  EXPECT_DOUBLE_EQ(r.log[0].lr, 0.002);
  EXPECT_DOUBLE_EQ(r.log[3].lr, 0.0002);
  // The last row describes the returned model.
  EXPECT_EQ(r.log.back().train_loss, evaluate(m, ds.train()).mse);
  EXPECT_EQ(r.log.back().test_rel_l2, evaluate(m, ds.test()).relative_l2);
}

TEST(Train, OverfitsSingleQuery) {
  DataConfig dc = tiny_data();
  dc.queries = 1;
  dc.n_train = 1;
  dc.n_test = 0;
  const Dataset ds = build_dataset(dc);
  OperatorModel m = init_model(tiny_model(), 10);
  TrainConfig c;
  c.epochs = 500;
  c.eval_every = 500;
  c.lr0 = 0.01;
  const TrainResult r = train(m, ds, c);
  ASSERT_EQ(r.log.size(), 2u);
  EXPECT_LT(r.log.back().train_loss, 0.01 * r.log.front().train_loss);
  EXPECT_TRUE(std::isnan(r.log.back().test_rel_l2));
}

TEST(Train, Deterministic) {
  const Dataset ds = build_dataset(tiny_data());
  TrainConfig c;
  c.epochs = 2;
  c.eval_every = 1;
  c.batch_size = 2;
  c.queries_per_sample = 3;
  c.seed = 11;
  OperatorModel a = init_model(tiny_model(), 12), b = a;
  const auto la = train(a, ds, c).log;
  c.threads = 2;
  const auto lb = train(b, ds, c).log;
  ASSERT_EQ(la.size(), lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    EXPECT_EQ(la[i].train_loss, lb[i].train_loss);
    EXPECT_EQ(la[i].test_rel_l2, lb[i].test_rel_l2);
  }
  EXPECT_EQ(flatten_parameters(a), flatten_parameters(b));
}

TEST(Train, NonFiniteLossAborts) {
  Dataset ds = build_dataset(tiny_data());
  ds.samples[0].targets[0] = std::numeric_limits<double>::quiet_NaN();
  OperatorModel m = init_model(tiny_model(), 13);
  TrainConfig c;
  c.epochs = 3;
  try {
    train(m, ds, c);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos);
  }
}

}  // namespace
}  // namespace qasdon
