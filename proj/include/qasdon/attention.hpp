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
#include <span>
#include <string_view>
#include <vector>

#include "qasdon/matrix.hpp"

namespace qasdon {

// How the band reaches past the first and last subnet.
enum class Padding { kCircular, kZero };

std::string_view padding_name(Padding p);
Padding parse_padding(std::string_view name);

// Row means of the r x c subnet stack.
std::vector<double> gap(const Matrix& stack);

// Nearest odd kernel size for r subnets: t = (log2(r) + b) / gamma, rounded
// half away from zero, bumped up to odd, clamped to [1, largest odd <= r].
int kernel_size(int r, double gamma, double b);

// Banded Toeplitz mixing of the pooled subnet activations followed by a
// sigmoid. Holds exactly k trainable weights; w[o + (k-1)/2] is the weight for
// offset o = i - j.
struct AttentionGate {
  int k = 1;
  std::vector<double> w;
  double gamma = 2.0;
  double b = 1.0;
  Padding padding = Padding::kCircular;

  std::size_t parameter_count() const { return w.size(); }
  int half_width() const { return (k - 1) / 2; }
};

// Kernel size from kernel_size(r, gamma, b), weights zero.
AttentionGate make_attention_gate(int r, double gamma, double b,
                                  Padding padding = Padding::kCircular);

// W_k z. When `mac_count` is given it is incremented once per multiply-add.
std::vector<double> attention_logits(const AttentionGate& gate,
                                     std::span<const double> z,
                                     std::size_t* mac_count = nullptr);

// sigmoid(W_k z); every entry lies in (0, 1).
std::vector<double> attention_weights(const AttentionGate& gate,
                                      std::span<const double> z,
                                      std::size_t* mac_count = nullptr);

// diag(omega) * stack.
Matrix modulate(const Matrix& stack, std::span<const double> omega);

struct AttentionGrad {
  Matrix d_stack;
  std::vector<double> d_w;
};

// Backward pass of stack -> gap -> attention_weights -> modulate, given the
// gradient with respect to the modulated stack.
AttentionGrad attention_backward(const AttentionGate& gate, const Matrix& stack,
                                 std::span<const double> omega,
                                 const Matrix& d_modulated);

}  // namespace qasdon
