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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace qasdon {
namespace {

Matrix random_stack(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m(r, c);
  m.data = oracle::uniform_vector(r * c, -2, 2, rng);
  return m;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Dense band matrix with w_{i-j} on |i-j| <= h, wrapped or truncated at the edges.
std::vector<std::vector<double>> dense_band(const AttentionGate& gate, int r) {
  std::vector<std::vector<double>> w(r, std::vector<double>(r, 0.0));
  const int h = gate.half_width();
  for (int i = 0; i < r; ++i) {
    for (int o = -h; o <= h; ++o) {
      int j = i - o;
      if (gate.padding == Padding::kCircular) {
        j = ((j % r) + r) % r;
      } else if (j < 0 || j >= r) {
        continue;
      }
      w[i][j] += gate.w[o + h];
    }
  }
  return w;
}

TEST(Gap, AllOnes) {
  Matrix m(3, 5);
  std::fill(m.data.begin(), m.data.end(), 1.0);
  EXPECT_EQ(gap(m), (std::vector<double>{1, 1, 1}));
}

TEST(Gap, ConstantRows) {
  Matrix m(3, 4);
  const double c[] = {-1.5, 0.0, 7.25};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = c[i];
  }
  const auto z = gap(m);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(z[i], c[i]);
}

TEST(Gap, RandomMatchesBruteForce) {
  std::mt19937_64 rng(1);
  const Matrix m = random_stack(4, 6, rng);
  const auto z = gap(m);
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 6; ++j) s += m.data[i * 6 + j];
    EXPECT_NEAR(z[i], s / 6, 1e-15);
  }
}

TEST(KernelSize, Examples) {
  EXPECT_EQ(kernel_size(2, 2, 1), 1);
  EXPECT_EQ(kernel_size(4, 2, 1), 3);
  EXPECT_EQ(kernel_size(8, 2, 1), 3);
  EXPECT_EQ(kernel_size(1, 2, 1), 1);
  // t = (5 + 1) / 1 = 6, bumped to 7.
  EXPECT_EQ(kernel_size(32, 1, 1), 7);
  EXPECT_EQ(kernel_size(5, 0.1, 1), 5);
  EXPECT_EQ(kernel_size(6, 0.1, 1), 5);
  EXPECT_EQ(kernel_size(16, 2, -10), 1);
}

TEST(KernelSize, AlwaysOddAndBounded) {
  for (int r = 1; r <= 64; ++r) {
    for (double g : {0.5, 1.0, 2.0, 3.0}) {
      for (double b : {-1.0, 0.0, 1.0, 2.0}) {
        const int k = kernel_size(r, g, b);
        EXPECT_EQ(k % 2, 1);
        EXPECT_GE(k, 1);
        EXPECT_LE(k, r % 2 ? r : std::max(1, r - 1));
      }
    }
  }
}

TEST(AttentionGate, ParameterCountEqualsKernel) {
  for (int r : {1, 2, 4, 8, 16}) {
    const AttentionGate g = make_attention_gate(r, 2, 1);
    EXPECT_EQ(g.parameter_count(), static_cast<std::size_t>(g.k));
  }
}

TEST(AttentionWeights, ZeroWeightsGiveHalf) {
  const AttentionGate g = make_attention_gate(4, 2, 1);
  const std::vector<double> z = {1, -3, 8, 0.5};
  for (double w : attention_weights(g, z)) EXPECT_EQ(w, 0.5);
}

TEST(AttentionWeights, KernelOneIsPointwise) {
  AttentionGate g = make_attention_gate(2, 2, 1);
  ASSERT_EQ(g.k, 1);
  g.w = {0.7};
  const std::vector<double> z = {1.5, -2.0};
  const auto om = attention_weights(g, z);
  EXPECT_DOUBLE_EQ(om[0], sigmoid(0.7 * 1.5));
  EXPECT_DOUBLE_EQ(om[1], sigmoid(0.7 * -2.0));
}

TEST(AttentionWeights, MatchesDenseBandOracle) {
  std::mt19937_64 rng(3);
  for (Padding pad : {Padding::kCircular, Padding::kZero}) {
    for (int r : {4, 5, 8}) {
      AttentionGate g = make_attention_gate(r, 2, 1, pad);
      g.w = oracle::uniform_vector(g.k, -1, 1, rng);
      const auto z = oracle::uniform_vector(r, -2, 2, rng);
      const auto band = dense_band(g, r);
      const auto om = attention_weights(g, z);
      for (int i = 0; i < r; ++i) {
        double a = 0;
        for (int j = 0; j < r; ++j) a += band[i][j] * z[j];
        EXPECT_NEAR(om[i], sigmoid(a), 1e-14);
      }
    }
  }
}

TEST(AttentionWeights, CircularAndZeroPaddingDifferAtEdges) {
  AttentionGate c = make_attention_gate(4, 2, 1, Padding::kCircular);
  AttentionGate zp = make_attention_gate(4, 2, 1, Padding::kZero);
  c.w = zp.w = {0.3, 0.5, -0.2};
  const std::vector<double> z = {1, 2, 3, 4};
  const auto a = attention_logits(c, z), b = attention_logits(zp, z);
  EXPECT_NE(a[0], b[0]);
  EXPECT_DOUBLE_EQ(a[1], b[1]);
  EXPECT_DOUBLE_EQ(a[2], b[2]);
  EXPECT_NE(a[3], b[3]);
}

TEST(AttentionWeights, StrictlyInsideUnitInterval) {
  std::mt19937_64 rng(5);
  AttentionGate g = make_attention_gate(8, 2, 1);
  for (int trial = 0; trial < 200; ++trial) {
    g.w = oracle::uniform_vector(g.k, -3, 3, rng);
    const auto z = oracle::uniform_vector(8, -5, 5, rng);
    for (double w : attention_weights(g, z)) {
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, 1.0);
    }
  }
}

TEST(AttentionWeights, SaturatedLogitsStayInsideUnitInterval) {
  AttentionGate g = make_attention_gate(2, 2, 1);
  g.w = {1.0};
  const std::vector<double> z = {800.0, -800.0};
  const auto om = attention_weights(g, z);
  EXPECT_LT(om[0], 1.0);
  EXPECT_GT(om[1], 0.0);
}

TEST(AttentionWeights, OperationCountLinearInR) {
  AttentionGate g = make_attention_gate(8, 2, 1);
  for (int r : {8, 16, 64, 256}) {
    const std::vector<double> z(r, 0.1);
    std::size_t macs = 0;
    attention_weights(g, z, &macs);
    EXPECT_EQ(macs, static_cast<std::size_t>(r) * g.k);
  }
}

TEST(AttentionWeights, RejectsKernelWiderThanInput) {
  const AttentionGate g = make_attention_gate(8, 2, 1);
  const std::vector<double> z(2, 0.0);
  EXPECT_THROW(attention_weights(g, z), std::invalid_argument);
}

TEST(Modulate, OnesZerosAndDense) {
  std::mt19937_64 rng(7);
  const Matrix h = random_stack(3, 4, rng);
  EXPECT_EQ(modulate(h, std::vector<double>(3, 1.0)), h);
  const Matrix zero = modulate(h, std::vector<double>(3, 0.0));
  for (double v : zero.data) EXPECT_EQ(v, 0.0);
  const auto om = oracle::uniform_vector(3, 0, 1, rng);
  const Matrix m = modulate(h, om);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(m(i, j), om[i] * h(i, j));
  }
  EXPECT_THROW(modulate(h, std::vector<double>(2, 1.0)), std::invalid_argument);
}

TEST(AttentionBackward, MatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (Padding pad : {Padding::kCircular, Padding::kZero}) {
    AttentionGate g = make_attention_gate(5, 1, 1, pad);
    ASSERT_EQ(g.k, 3);
    g.w = oracle::uniform_vector(g.k, -1, 1, rng);
    Matrix h = random_stack(5, 3, rng);
    const Matrix c = random_stack(5, 3, rng);
    auto loss = [&](const AttentionGate& gate, const Matrix& stack) {
      const Matrix m = modulate(stack, attention_weights(gate, gap(stack)));
      double s = 0;
      for (std::size_t i = 0; i < m.data.size(); ++i) s += c.data[i] * m.data[i];
      return s;
    };
    const auto om = attention_weights(g, gap(h));
    const AttentionGrad grad = attention_backward(g, h, om, c);
    for (int i = 0; i < g.k; ++i) {
      const double fd = oracle::central_diff(
          [&](std::vector<double>& w) {
            AttentionGate gg = g;
            gg.w = w;
            return loss(gg, h);
          },
          g.w, i);
      EXPECT_TRUE(oracle::grad_close(grad.d_w[i], fd, 1e-6, 1e-9)) << "w" << i;
    }
    for (std::size_t i = 0; i < h.data.size(); ++i) {
      const double fd = oracle::central_diff(
          [&](std::vector<double>& d) {
            Matrix hh = h;
            hh.data = d;
            return loss(g, hh);
          },
          h.data, i);
      EXPECT_TRUE(oracle::grad_close(grad.d_stack.data[i], fd, 1e-6, 1e-9)) << "H" << i;
    }
  }
}

TEST(PaddingNames, RoundTrip) {
  EXPECT_EQ(parse_padding(padding_name(Padding::kCircular)), Padding::kCircular);
  EXPECT_EQ(parse_padding(padding_name(Padding::kZero)), Padding::kZero);
  EXPECT_THROW(parse_padding("reflect"), std::invalid_argument);
}

}  // namespace
}  // namespace qasdon
