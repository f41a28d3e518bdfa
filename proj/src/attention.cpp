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

#include "qasdon/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qasdon {
namespace {

// Kept strictly inside (0, 1): for |x| beyond ~37 the rounded logistic would
// otherwise hit 1.0 (or underflow to 0) and a subnet could be fully switched off.
double sigmoid(double x) {
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  constexpr double kLow = std::numeric_limits<double>::min();
  if (x >= 0) return std::min(1.0 / (1.0 + std::exp(-x)), kHigh);
  const double e = std::exp(x);
  return std::max(e / (1.0 + e), kLow);
}

void check_gate(const AttentionGate& gate, std::size_t r) {
  if (gate.k < 1 || gate.k % 2 == 0) {
    throw std::invalid_argument("attention kernel size must be odd and positive");
  }
  if (gate.w.size() != static_cast<std::size_t>(gate.k)) {
    throw std::invalid_argument("attention gate needs exactly k weights");
  }
  if (static_cast<std::size_t>(gate.k) > r) {
    throw std::invalid_argument("attention kernel size " + std::to_string(gate.k) +
                                " exceeds subnet count " + std::to_string(r));
  }
}

// Column j feeding row i at offset o, or -1 when it falls off a zero-padded edge.
long source_index(const AttentionGate& gate, long i, long o, long r) {
  const long j = i - o;
  if (gate.padding == Padding::kCircular) return ((j % r) + r) % r;
  return (j < 0 || j >= r) ? -1 : j;
}

}  // namespace

std::string_view padding_name(Padding p) {
  return p == Padding::kCircular ? "circular" : "zero";
}

Padding parse_padding(std::string_view name) {
  if (name == "circular") return Padding::kCircular;
  if (name == "zero") return Padding::kZero;
  throw std::invalid_argument("unknown padding '" + std::string(name) + "'");
}

std::vector<double> gap(const Matrix& stack) {
  if (stack.rows == 0 || stack.cols == 0) {
    throw std::invalid_argument("subnet stack must be non-empty");
  }
  std::vector<double> z(stack.rows, 0.0);
  for (std::size_t i = 0; i < stack.rows; ++i) {
    double s = 0.0;
    for (double v : stack.row(i)) s += v;
    z[i] = s / static_cast<double>(stack.cols);
  }
  return z;
}

int kernel_size(int r, double gamma, double b) {
  if (r < 1) throw std::invalid_argument("subnet count must be >= 1");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  const double t = std::log2(static_cast<double>(r)) / gamma + b / gamma;
  long k = std::lround(t);
  if (k % 2 == 0) k += 1;
  const long max_k = r % 2 == 1 ? r : r - 1;
  if (k < 1) k = 1;
  if (k > max_k) k = max_k;
  return static_cast<int>(k);
}

AttentionGate make_attention_gate(int r, double gamma, double b, Padding padding) {
  AttentionGate gate;
  gate.k = kernel_size(r, gamma, b);
  gate.w.assign(gate.k, 0.0);
  gate.gamma = gamma;
  gate.b = b;
  gate.padding = padding;
  return gate;
}

std::vector<double> attention_logits(const AttentionGate& gate,
                                     std::span<const double> z,
                                     std::size_t* mac_count) {
  check_gate(gate, z.size());
  const long r = static_cast<long>(z.size());
  const long h = gate.half_width();
  std::vector<double> a(z.size(), 0.0);
  for (long i = 0; i < r; ++i) {
    double acc = 0.0;
    for (long o = -h; o <= h; ++o) {
      const long j = source_index(gate, i, o, r);
      if (j < 0) continue;
      acc += gate.w[o + h] * z[j];
      if (mac_count) ++*mac_count;
    }
    a[i] = acc;
  }
  return a;
}

std::vector<double> attention_weights(const AttentionGate& gate,
                                      std::span<const double> z,
                                      std::size_t* mac_count) {
  std::vector<double> omega = attention_logits(gate, z, mac_count);
  for (double& v : omega) v = sigmoid(v);
  return omega;
}

Matrix modulate(const Matrix& stack, std::span<const double> omega) {
  if (omega.size() != stack.rows) {
    throw std::invalid_argument("one attention weight per subnet expected");
  }
  Matrix out = stack;
  for (std::size_t i = 0; i < stack.rows; ++i) {
    for (double& v : out.row(i)) v *= omega[i];
  }
  return out;
}

AttentionGrad attention_backward(const AttentionGate& gate, const Matrix& stack,
                                 std::span<const double> omega,
                                 const Matrix& d_modulated) {
  const std::size_t r = stack.rows;
  const std::size_t c = stack.cols;
  if (omega.size() != r || d_modulated.rows != r || d_modulated.cols != c) {
    throw std::invalid_argument("attention backward: shape mismatch");
  }
  check_gate(gate, r);
  const std::vector<double> z = gap(stack);

  AttentionGrad g{Matrix(r, c), std::vector<double>(gate.k, 0.0)};
  std::vector<double> d_logit(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double d_omega = 0.0;
    const auto dm = d_modulated.row(i);
    const auto h = stack.row(i);
    auto ds = g.d_stack.row(i);
    for (std::size_t j = 0; j < c; ++j) {
      ds[j] = omega[i] * dm[j];
      d_omega += dm[j] * h[j];
    }
    d_logit[i] = d_omega * omega[i] * (1.0 - omega[i]);
  }

  const long rl = static_cast<long>(r);
  const long hw = gate.half_width();
  std::vector<double> d_z(r, 0.0);
  for (long i = 0; i < rl; ++i) {
    for (long o = -hw; o <= hw; ++o) {
      const long j = source_index(gate, i, o, rl);
      if (j < 0) continue;
      g.d_w[o + hw] += d_logit[i] * z[j];
      d_z[j] += d_logit[i] * gate.w[o + hw];
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    const double share = d_z[i] / static_cast<double>(c);
    for (double& v : g.d_stack.row(i)) v += share;
  }
  return g;
}

}  // namespace qasdon
