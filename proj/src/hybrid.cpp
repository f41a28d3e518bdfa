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

#include "qasdon/hybrid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qasdon/ansatz.hpp"

namespace qasdon {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

AffinePair::AffinePair(std::size_t in_dim, std::size_t hidden,
                       std::size_t out_dim)
    : w1(in_dim, hidden), b1(hidden, 0.0), w2(hidden, out_dim), b2(out_dim, 0.0) {}

void glorot_init(AffinePair& pair, Rng& rng) {
  auto fill = [&rng](Matrix& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : w.data) v = dist(rng);
  };
  fill(pair.w1);
  fill(pair.w2);
  std::fill(pair.b1.begin(), pair.b1.end(), 0.0);
  std::fill(pair.b2.begin(), pair.b2.end(), 0.0);
}

std::vector<double> affine_forward(const AffinePair& pair,
                                   std::span<const double> x, AffineTape* tape) {
  require(x.size() == pair.in_dim(),
          "affine input has " + std::to_string(x.size()) + " entries, expected " +
              std::to_string(pair.in_dim()));
  const std::size_t hidden = pair.hidden();
  std::vector<double> h(pair.b1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const auto w = pair.w1.row(i);
    for (std::size_t j = 0; j < hidden; ++j) h[j] += xi * w[j];
  }
  for (double& v : h) v = std::tanh(v);

  std::vector<double> out(pair.b2);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double hj = h[j];
    const auto w = pair.w2.row(j);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += hj * w[k];
  }
  if (tape) {
    tape->input.assign(x.begin(), x.end());
    tape->activation = std::move(h);
  }
  return out;
}

std::vector<double> affine_backward(const AffinePair& pair, const AffineTape& tape,
                                    std::span<const double> upstream,
                                    AffinePair& grad) {
  require(upstream.size() == pair.out_dim() &&
              tape.input.size() == pair.in_dim() &&
              tape.activation.size() == pair.hidden(),
          "affine tape does not match layer");
  const std::size_t hidden = pair.hidden();
  const std::size_t out_dim = pair.out_dim();

  std::vector<double> dh(hidden, 0.0);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double hj = tape.activation[j];
    const auto w = pair.w2.row(j);
    auto gw = grad.w2.row(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < out_dim; ++k) {
      gw[k] += hj * upstream[k];
      acc += w[k] * upstream[k];
    }
    // tanh' = 1 - tanh^2
    dh[j] = acc * (1.0 - hj * hj);
  }
  for (std::size_t k = 0; k < out_dim; ++k) grad.b2[k] += upstream[k];
  for (std::size_t j = 0; j < hidden; ++j) grad.b1[j] += dh[j];

  std::vector<double> dx(pair.in_dim(), 0.0);
  for (std::size_t i = 0; i < dx.size(); ++i) {
    const double xi = tape.input[i];
    const auto w = pair.w1.row(i);
    auto gw = grad.w1.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) {
      gw[j] += xi * dh[j];
      acc += w[j] * dh[j];
    }
    dx[i] = acc;
  }
  return dx;
}

HybridLayer make_hybrid_layer(std::size_t in_dim, std::size_t hidden,
                              std::size_t out_dim, AnsatzKind kind,
                              int n_qubits, int depth, bool outer_activation) {
  require(in_dim >= 1 && hidden >= 1 && out_dim >= 1,
          "hybrid layer dimensions must be positive");
  HybridLayer layer;
  layer.circuit = build_ansatz(kind, n_qubits, depth);
  layer.params.pre = AffinePair(in_dim, hidden, n_qubits);
  layer.params.theta.assign(layer.circuit.param_count, 0.0);
  layer.params.post = AffinePair(n_qubits, hidden, out_dim);
  layer.outer_activation = outer_activation;
  return layer;
}

void initialize(HybridLayer& layer, Rng& rng) {
  glorot_init(layer.params.pre, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (double& t : layer.params.theta) t = angle(rng);
  glorot_init(layer.params.post, rng);
}

HybridParams zeros_like(const HybridParams& params) {
  HybridParams z;
  z.pre = AffinePair(params.pre.in_dim(), params.pre.hidden(), params.pre.out_dim());
  z.theta.assign(params.theta.size(), 0.0);
  z.post =
      AffinePair(params.post.in_dim(), params.post.hidden(), params.post.out_dim());
  return z;
}

HybridForward hybrid_forward(const HybridLayer& layer, std::span<const double> x) {
  HybridForward fwd;
  HybridTape& tape = fwd.tape;
  tape.angles = affine_forward(layer.params.pre, x, &tape.pre);
  tape.state = run_circuit(layer.circuit, tape.angles, layer.params.theta);
  tape.expectations = expectations_z(tape.state);
  fwd.output = affine_forward(layer.params.post, tape.expectations, &tape.post);
  if (layer.outer_activation) {
    for (double& v : fwd.output) v = std::tanh(v);
  }
  tape.output = fwd.output;
  return fwd;
}

std::vector<double> hybrid_backward_accumulate(const HybridLayer& layer,
                                               const HybridTape& tape,
                                               std::span<const double> upstream,
                                               HybridParams& acc) {
  require(upstream.size() == layer.out_dim() && tape.output.size() == layer.out_dim(),
          "upstream gradient does not match layer output");
  require(tape.state.n_qubits() == layer.circuit.n_qubits &&
              tape.angles.size() == static_cast<std::size_t>(layer.circuit.n_qubits),
          "stale tape: circuit shape differs");

  std::vector<double> d_out(upstream.begin(), upstream.end());
  if (layer.outer_activation) {
    for (std::size_t k = 0; k < d_out.size(); ++k) {
      d_out[k] *= 1.0 - tape.output[k] * tape.output[k];
    }
  }
  const std::vector<double> d_f =
      affine_backward(layer.params.post, tape.post, d_out, acc.post);
  const CircuitVjp vjp = circuit_vjp(layer.circuit, tape.angles,
                                     layer.params.theta, d_f, tape.state);
  for (std::size_t i = 0; i < vjp.d_params.size(); ++i) {
    acc.theta[i] += vjp.d_params[i];
  }
  return affine_backward(layer.params.pre, tape.pre, vjp.d_inputs, acc.pre);
}

HybridGradients hybrid_backward(const HybridLayer& layer, const HybridTape& tape,
                                std::span<const double> upstream) {
  HybridGradients g{zeros_like(layer.params), {}};
  g.input = hybrid_backward_accumulate(layer, tape, upstream, g.params);
  return g;
}

}  // namespace qasdon
