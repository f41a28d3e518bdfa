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

#include <span>
#include <vector>

#include "qasdon/circuit.hpp"
#include "qasdon/matrix.hpp"
#include "qasdon/qsim.hpp"
#include "qasdon/random.hpp"

namespace qasdon {

// psi(x) = W2^T tanh(W1^T x + b1) + b2, with W1 in_dim x hidden and
// W2 hidden x out_dim.
struct AffinePair {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;

  AffinePair() = default;
  AffinePair(std::size_t in_dim, std::size_t hidden, std::size_t out_dim);

  std::size_t in_dim() const { return w1.rows; }
  std::size_t hidden() const { return w1.cols; }
  std::size_t out_dim() const { return w2.cols; }
  std::size_t parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
  bool operator==(const AffinePair&) const = default;
};

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
void glorot_init(AffinePair& pair, Rng& rng);

struct AffineTape {
  std::vector<double> input;
  std::vector<double> activation;  // tanh of the first affine map
};

std::vector<double> affine_forward(const AffinePair& pair,
                                   std::span<const double> x, AffineTape* tape);

// Accumulates parameter gradients into `grad` and returns d(loss)/dx.
std::vector<double> affine_backward(const AffinePair& pair, const AffineTape& tape,
                                    std::span<const double> upstream,
                                    AffinePair& grad);

// Trainable state of one hybrid layer. Also used as the gradient container.
struct HybridParams {
  AffinePair pre;
  std::vector<double> theta;
  AffinePair post;

  std::size_t parameter_count() const {
    return pre.parameter_count() + theta.size() + post.parameter_count();
  }
  bool operator==(const HybridParams&) const = default;
};

// h(x) = phi(f(psi(x))): classical pre-network, PQC returning <Z_v> for every
// qubit, classical post-network.
struct HybridLayer {
  CircuitSpec circuit;
  HybridParams params;
  // Applies tanh to the post-network output as well.
  bool outer_activation = false;

  std::size_t in_dim() const { return params.pre.in_dim(); }
  std::size_t out_dim() const { return params.post.out_dim(); }
  std::size_t parameter_count() const { return params.parameter_count(); }
};

// All parameters zero. Throws on inconsistent dimensions.
HybridLayer make_hybrid_layer(std::size_t in_dim, std::size_t hidden,
                              std::size_t out_dim, AnsatzKind kind,
                              int n_qubits, int depth,
                              bool outer_activation = false);

// Glorot affine weights, zero biases, circuit angles uniform in [0, 2pi).
void initialize(HybridLayer& layer, Rng& rng);

// Zero-valued gradient container shaped like `params`.
HybridParams zeros_like(const HybridParams& params);

struct HybridTape {
  AffineTape pre;
  std::vector<double> angles;        // circuit inputs psi(x)
  StateVector state{1};              // U(z, theta)|0>
  std::vector<double> expectations;  // f(psi(x))
  AffineTape post;
  std::vector<double> output;
};

struct HybridForward {
  std::vector<double> output;
  HybridTape tape;
};

HybridForward hybrid_forward(const HybridLayer& layer, std::span<const double> x);

struct HybridGradients {
  HybridParams params;
  std::vector<double> input;
};

HybridGradients hybrid_backward(const HybridLayer& layer, const HybridTape& tape,
                                std::span<const double> upstream);

// Adds parameter gradients into `acc`; returns d(loss)/dx.
std::vector<double> hybrid_backward_accumulate(const HybridLayer& layer,
                                               const HybridTape& tape,
                                               std::span<const double> upstream,
                                               HybridParams& acc);

}  // namespace qasdon
