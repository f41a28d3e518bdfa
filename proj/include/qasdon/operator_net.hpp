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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qasdon/attention.hpp"
#include "qasdon/circuit.hpp"
#include "qasdon/hybrid.hpp"
#include "qasdon/random.hpp"

namespace qasdon {

// How sensor values are assigned to branch subnets.
enum class Slicing { kContiguous, kInterleaved };
// kBypass fixes every attention weight to 1.
enum class GateMode { kAttention, kBypass };

std::string_view slicing_name(Slicing s);
Slicing parse_slicing(std::string_view name);
std::string_view gate_mode_name(GateMode m);
GateMode parse_gate_mode(std::string_view name);

struct ModelConfig {
  AnsatzKind ansatz = AnsatzKind::kCircuitBlock;
  int qubits = 10;
  int depth = 2;
  int hidden = 50;
  int subnets = 4;     // r
  int sensors = 64;    // d
  int latent = 40;     // p
  int query_dim = 3;   // m, (x, y, t)
  double gamma = 2.0;
  double eca_b = 1.0;
  Padding padding = Padding::kCircular;
  GateMode gate_mode = GateMode::kAttention;
  Slicing slicing = Slicing::kContiguous;
  bool outer_activation = false;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct BranchNet {
  std::vector<HybridLayer> subnets;
  AttentionGate gate;
  GateMode mode = GateMode::kAttention;
  Slicing slicing = Slicing::kContiguous;
  std::size_t input_dim = 0;

  int r() const { return static_cast<int>(subnets.size()); }
  std::size_t features_per_subnet() const { return subnets.front().out_dim(); }
  std::size_t output_dim() const { return subnets.size() * features_per_subnet(); }
};

struct TrunkNet {
  HybridLayer layer;
};

// G(u)(y) = <b(u_s), t(y)>.
struct OperatorModel {
  ModelConfig config;
  BranchNet branch;
  TrunkNet trunk;
};

// All parameters zero.
OperatorModel make_model(const ModelConfig& config);
void initialize(OperatorModel& model, Rng& rng);

// r equal slices of u in the configured order. Throws if r does not divide d.
std::vector<std::vector<double>> partition_input(
    std::span<const double> u, int r, Slicing slicing = Slicing::kContiguous);

struct BranchTape {
  std::vector<HybridTape> subnets;
  Matrix stack;               // H, r x c
  std::vector<double> omega;  // attention weights
};

struct BranchForward {
  std::vector<double> b;  // rows of diag(omega) H, in subnet order
  BranchTape tape;
};

BranchForward branch_forward(const BranchNet& branch, std::span<const double> u);
HybridForward trunk_forward(const TrunkNet& trunk, std::span<const double> y);

double inner_product(std::span<const double> b, std::span<const double> t);
double predict(const OperatorModel& model, std::span<const double> u,
               std::span<const double> y);

// Gradient container mirroring every trainable block of OperatorModel.
struct ModelGrad {
  std::vector<HybridParams> subnets;
  std::vector<double> gate_w;
  HybridParams trunk;
};

ModelGrad zeros_like(const OperatorModel& model);

// Accumulates branch gradients for upstream d(loss)/db.
void branch_backward(const BranchNet& branch, const BranchTape& tape,
                     std::span<const double> d_b, ModelGrad& acc);

struct ParameterCount {
  std::size_t total = 0;
  // branch_affine, branch_circuit, trunk_affine, trunk_circuit, attention
  std::map<std::string, std::size_t> by_component;
};

ParameterCount count_parameters(const OperatorModel& model);

// Views over every trainable block in checkpoint order: branch subnets in
// order (pre.w1, pre.b1, pre.w2, pre.b2, theta, post.w1, post.b1, post.w2,
// post.b2), attention weights, then the trunk layer in the same block order.
std::vector<std::span<double>> parameter_blocks(OperatorModel& model);
std::vector<std::span<double>> parameter_blocks(ModelGrad& grad);

std::vector<double> flatten_parameters(const OperatorModel& model);
void assign_parameters(OperatorModel& model, std::span<const double> flat);
std::vector<double> flatten(const ModelGrad& grad);
void add_into(ModelGrad& acc, const ModelGrad& other);

}  // namespace qasdon
