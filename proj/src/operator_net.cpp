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

#include "qasdon/operator_net.hpp"

#include <algorithm>
#include <stdexcept>

namespace qasdon {
namespace {

void push_blocks(HybridParams& p, std::vector<std::span<double>>& out) {
  out.emplace_back(p.pre.w1.data);
  out.emplace_back(p.pre.b1);
  out.emplace_back(p.pre.w2.data);
  out.emplace_back(p.pre.b2);
  out.emplace_back(p.theta);
  out.emplace_back(p.post.w1.data);
  out.emplace_back(p.post.b1);
  out.emplace_back(p.post.w2.data);
  out.emplace_back(p.post.b2);
}

void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

}  // namespace

std::string_view slicing_name(Slicing s) {
  return s == Slicing::kContiguous ? "contiguous" : "interleaved";
}

Slicing parse_slicing(std::string_view name) {
  if (name == "contiguous") return Slicing::kContiguous;
  if (name == "interleaved") return Slicing::kInterleaved;
  throw std::invalid_argument("unknown slicing '" + std::string(name) + "'");
}

std::string_view gate_mode_name(GateMode m) {
  return m == GateMode::kAttention ? "attention" : "bypass";
}

GateMode parse_gate_mode(std::string_view name) {
  if (name == "attention") return GateMode::kAttention;
  if (name == "bypass") return GateMode::kBypass;
  throw std::invalid_argument("unknown gate mode '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (qubits < 2) fail("qubits", "must be >= 2");
  if (qubits > 20) fail("qubits", "must be <= 20");
  if (depth < 1) fail("depth", "must be >= 1");
  if (hidden < 1) fail("hidden", "must be >= 1");
  if (subnets < 1) fail("subnets", "must be >= 1");
  if (sensors < 1) fail("sensors", "must be >= 1");
  if (latent < 1) fail("latent", "must be >= 1");
  if (query_dim < 1) fail("query_dim", "must be >= 1");
  if (sensors % subnets != 0) fail("subnets", "must divide sensors (d)");
  if (latent % subnets != 0) fail("subnets", "must divide latent (p)");
  if (!(gamma > 0)) fail("gamma", "must be positive");
}

OperatorModel make_model(const ModelConfig& config) {
  config.validate();
  OperatorModel model;
  model.config = config;
  const int r = config.subnets;
  const std::size_t slice = config.sensors / r;
  const std::size_t c = config.latent / r;
  for (int i = 0; i < r; ++i) {
    model.branch.subnets.push_back(make_hybrid_layer(
        slice, config.hidden, c, config.ansatz, config.qubits, config.depth,
        config.outer_activation));
  }
  model.branch.gate = make_attention_gate(r, config.gamma, config.eca_b, config.padding);
  model.branch.mode = config.gate_mode;
  model.branch.slicing = config.slicing;
  model.branch.input_dim = config.sensors;
  model.trunk.layer = make_hybrid_layer(config.query_dim, config.hidden,
                                        config.latent, config.ansatz,
                                        config.qubits, config.depth,
                                        config.outer_activation);
  return model;
}

void initialize(OperatorModel& model, Rng& rng) {
  for (HybridLayer& s : model.branch.subnets) initialize(s, rng);
  std::fill(model.branch.gate.w.begin(), model.branch.gate.w.end(), 0.0);
  initialize(model.trunk.layer, rng);
}

std::vector<std::vector<double>> partition_input(std::span<const double> u, int r,
                                                 Slicing slicing) {
  if (r < 1 || u.size() % static_cast<std::size_t>(r) != 0) {
    throw std::invalid_argument("cannot split " + std::to_string(u.size()) +
                                " sensors into " + std::to_string(r) +
                                " equal slices");
  }
  const std::size_t len = u.size() / r;
  std::vector<std::vector<double>> out(r);
  for (int j = 0; j < r; ++j) {
    out[j].reserve(len);
    for (std::size_t k = 0; k < len; ++k) {
      out[j].push_back(slicing == Slicing::kContiguous ? u[j * len + k]
                                                       : u[k * r + j]);
    }
  }
  return out;
}

BranchForward branch_forward(const BranchNet& branch, std::span<const double> u) {
  if (u.size() != branch.input_dim) {
    throw std::invalid_argument("branch expects " + std::to_string(branch.input_dim) +
                                " sensor values, got " + std::to_string(u.size()));
  }
  const int r = branch.r();
  const std::size_t c = branch.features_per_subnet();
  const auto slices = partition_input(u, r, branch.slicing);

  BranchForward fwd;
  BranchTape& tape = fwd.tape;
  tape.stack = Matrix(r, c);
  tape.subnets.reserve(r);
  for (int i = 0; i < r; ++i) {
    HybridForward h = hybrid_forward(branch.subnets[i], slices[i]);
    std::copy(h.output.begin(), h.output.end(), tape.stack.row(i).begin());
    tape.subnets.push_back(std::move(h.tape));
  }
  if (branch.mode == GateMode::kAttention) {
    tape.omega = attention_weights(branch.gate, gap(tape.stack));
  } else {
    tape.omega.assign(r, 1.0);
  }
  fwd.b = modulate(tape.stack, tape.omega).data;
  return fwd;
}

HybridForward trunk_forward(const TrunkNet& trunk, std::span<const double> y) {
  return hybrid_forward(trunk.layer, y);
}

double inner_product(std::span<const double> b, std::span<const double> t) {
  if (b.size() != t.size()) {
    throw std::invalid_argument("branch and trunk outputs differ in length");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) s += b[k] * t[k];
  return s;
}

double predict(const OperatorModel& model, std::span<const double> u,
               std::span<const double> y) {
  const BranchForward b = branch_forward(model.branch, u);
  const HybridForward t = trunk_forward(model.trunk, y);
  return inner_product(b.b, t.output);
}

ModelGrad zeros_like(const OperatorModel& model) {
  ModelGrad g;
  for (const HybridLayer& s : model.branch.subnets) g.subnets.push_back(zeros_like(s.params));
  g.gate_w.assign(model.branch.gate.w.size(), 0.0);
  g.trunk = zeros_like(model.trunk.layer.params);
  return g;
}

void branch_backward(const BranchNet& branch, const BranchTape& tape,
                     std::span<const double> d_b, ModelGrad& acc) {
  const std::size_t r = branch.subnets.size();
  const std::size_t c = branch.features_per_subnet();
  if (d_b.size() != r * c || tape.subnets.size() != r) {
    throw std::invalid_argument("branch backward: shape mismatch");
  }
  Matrix d_mod(r, c);
  std::copy(d_b.begin(), d_b.end(), d_mod.data.begin());

  Matrix d_stack;
  if (branch.mode == GateMode::kAttention) {
    AttentionGrad ag = attention_backward(branch.gate, tape.stack, tape.omega, d_mod);
    for (std::size_t i = 0; i < ag.d_w.size(); ++i) acc.gate_w[i] += ag.d_w[i];
    d_stack = std::move(ag.d_stack);
  } else {
    d_stack = std::move(d_mod);
  }
  for (std::size_t i = 0; i < r; ++i) {
    hybrid_backward_accumulate(branch.subnets[i], tape.subnets[i], d_stack.row(i),
                               acc.subnets[i]);
  }
}

ParameterCount count_parameters(const OperatorModel& model) {
  ParameterCount pc;
  auto& m = pc.by_component;
  m["branch_affine"] = 0;
  m["branch_circuit"] = 0;
  for (const HybridLayer& s : model.branch.subnets) {
    m["branch_affine"] += s.params.pre.parameter_count() + s.params.post.parameter_count();
    m["branch_circuit"] += s.params.theta.size();
  }
  const HybridParams& t = model.trunk.layer.params;
  m["trunk_affine"] = t.pre.parameter_count() + t.post.parameter_count();
  m["trunk_circuit"] = t.theta.size();
  m["attention"] = model.branch.gate.parameter_count();
  for (const auto& [name, n] : m) pc.total += n;
  return pc;
}

std::vector<std::span<double>> parameter_blocks(OperatorModel& model) {
  std::vector<std::span<double>> out;
  for (HybridLayer& s : model.branch.subnets) push_blocks(s.params, out);
  out.emplace_back(model.branch.gate.w);
  push_blocks(model.trunk.layer.params, out);
  return out;
}

std::vector<std::span<double>> parameter_blocks(ModelGrad& grad) {
  std::vector<std::span<double>> out;
  for (HybridParams& s : grad.subnets) push_blocks(s, out);
  out.emplace_back(grad.gate_w);
  push_blocks(grad.trunk, out);
  return out;
}

std::vector<double> flatten_parameters(const OperatorModel& model) {
  std::vector<double> flat;
  for (auto block : parameter_blocks(const_cast<OperatorModel&>(model))) {
    flat.insert(flat.end(), block.begin(), block.end());
  }
  return flat;
}

void assign_parameters(OperatorModel& model, std::span<const double> flat) {
  std::size_t pos = 0;
  auto blocks = parameter_blocks(model);
  std::size_t total = 0;
  for (auto b : blocks) total += b.size();
  if (flat.size() != total) {
    throw std::invalid_argument("parameter vector has " + std::to_string(flat.size()) +
                                " entries, model needs " + std::to_string(total));
  }
  for (auto block : blocks) {
    std::copy_n(flat.begin() + pos, block.size(), block.begin());
    pos += block.size();
  }
}

std::vector<double> flatten(const ModelGrad& grad) {
  std::vector<double> flat;
  for (auto block : parameter_blocks(const_cast<ModelGrad&>(grad))) {
    flat.insert(flat.end(), block.begin(), block.end());
  }
  return flat;
}

void add_into(ModelGrad& acc, const ModelGrad& other) {
  auto a = parameter_blocks(acc);
  auto b = parameter_blocks(const_cast<ModelGrad&>(other));
  if (a.size() != b.size()) throw std::invalid_argument("gradient shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw std::invalid_argument("gradient shape mismatch");
    for (std::size_t k = 0; k < a[i].size(); ++k) a[i][k] += b[i][k];
  }
}

}  // namespace qasdon
