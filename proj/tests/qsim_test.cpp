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

#include "qasdon/qsim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qasdon/ansatz.hpp"

namespace qasdon {
namespace {

constexpr double kPi = std::numbers::pi;

StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> a(std::size_t{1} << n);
  double s = 0;
  for (auto& c : a) {
    c = {d(rng), d(rng)};
    s += std::norm(c);
  }
  for (auto& c : a) c /= std::sqrt(s);
  return StateVector(n, a);
}

Gate random_gate(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind_d(0, 6), q(0, n - 1);
  const auto kind = static_cast<GateKind>(kind_d(rng));
  const int t = q(rng);
  if (!is_controlled(kind)) {
    return is_parameterized(kind) ? Gate::trainable(kind, t, 0) : Gate::fixed(kind, t);
  }
  int c = q(rng);
  while (c == t) c = q(rng);
  return is_parameterized(kind) ? Gate::trainable(kind, t, 0, c) : Gate::fixed(kind, t, c);
}

TEST(ApplyGate, RxZeroIsIdentity) {
  std::mt19937_64 rng(1);
  StateVector s = random_state(3, rng);
  const StateVector before = s;
  apply_gate(s, Gate::trainable(GateKind::kRX, 1, 0), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], before[i]);
}

TEST(ApplyGate, CnotTruthTable) {
  // |q1 q0> = |01> is basis index 1; expect |11> = index 3.
  std::vector<Complex> a(4, 0.0);
  a[1] = 1.0;
  StateVector s(2, a);
  apply_gate(s, Gate::fixed(GateKind::kCNOT, 1, 0));
  EXPECT_EQ(s[3], Complex(1.0));
  EXPECT_EQ(s[1], Complex(0.0));

  StateVector zero(2);
  apply_gate(zero, Gate::fixed(GateKind::kCNOT, 1, 0));
  EXPECT_EQ(zero[0], Complex(1.0));
}

TEST(ApplyGate, HadamardOnQubitZero) {
  StateVector s(2);
  apply_gate(s, Gate::fixed(GateKind::kH, 0));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s[0].real(), r, 1e-15);
  EXPECT_NEAR(s[1].real(), r, 1e-15);
  EXPECT_EQ(s[2], Complex(0.0));
  EXPECT_EQ(s[3], Complex(0.0));
}

TEST(ApplyGate, ControlledRotationOnlyActsOnControlOne) {
  StateVector s(2);
  apply_gate(s, Gate::trainable(GateKind::kCRX, 1, 0, 0), kPi);
  EXPECT_EQ(s[0], Complex(1.0));
  std::vector<Complex> a(4, 0.0);
  a[1] = 1.0;  // control qubit 0 set
  StateVector t(2, a);
  apply_gate(t, Gate::trainable(GateKind::kCRX, 1, 0, 0), kPi);
  EXPECT_NEAR(std::norm(t[3]), 1.0, 1e-15);
}

TEST(ApplyGate, RejectsBadGates) {
  StateVector s(2);
  EXPECT_THROW(apply_gate(s, Gate::fixed(GateKind::kH, 2)), std::out_of_range);
  EXPECT_THROW(apply_gate(s, Gate::trainable(GateKind::kRX, 0, 0)), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, Gate::fixed(GateKind::kH, 0), 0.3), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, Gate::fixed(GateKind::kCNOT, 1, 1)), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, Gate::fixed(GateKind::kCNOT, 1)), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, Gate::trainable(GateKind::kCRX, 0, 0, 5), 0.1),
               std::out_of_range);
}

TEST(ApplyGate, InverseUndoesGate) {
  std::mt19937_64 rng(4);
  StateVector s = random_state(4, rng);
  const StateVector before = s;
  for (int i = 0; i < 50; ++i) {
    const Gate g = random_gate(4, rng);
    const auto a = is_parameterized(g.kind) ? std::optional<double>(0.7 * i) : std::nullopt;
    apply_gate(s, g, a);
    apply_gate_inverse(s, g, a);
  }
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s[i] - before[i]), 0.0, 1e-13);
}

TEST(StateVector, NormPreservedOverManyGates) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  StateVector s = random_state(6, rng);
  for (int i = 0; i < 1000; ++i) {
    const Gate g = random_gate(6, rng);
    apply_gate(s, g, is_parameterized(g.kind) ? std::optional<double>(ang(rng)) : std::nullopt);
  }
  EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-10);
}

TEST(RunCircuit, EncoderOnlySingleQubit) {
  CircuitSpec spec;
  spec.n_qubits = 1;
  spec.gates = build_encoder(1);
  const double zero[] = {0.0};
  StateVector s = run_circuit(spec, zero, {});
  EXPECT_EQ(s[0], Complex(1.0));

  const double pi[] = {kPi};
  s = run_circuit(spec, pi, {});
  EXPECT_NEAR(std::norm(s[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::norm(s[0]), 0.0, 1e-15);
}

TEST(RunCircuit, MatchesDenseMatrixChain) {
  std::mt19937_64 rng(11);
  for (AnsatzKind kind : {AnsatzKind::kCircuitBlock, AnsatzKind::kNearestNeighbour,
                          AnsatzKind::kAllToAll}) {
    const CircuitSpec spec = build_ansatz(kind, 3, 2);
    const auto z = oracle::uniform_vector(3, -kPi, kPi, rng);
    const auto th = oracle::uniform_vector(spec.param_count, 0, 2 * kPi, rng);
    const StateVector s = run_circuit(spec, z, th);
    const auto ref = oracle::matrix_chain_state(spec, z, th);
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(std::norm(s[i]), std::norm(ref[i]), 1e-12);
      overlap += std::conj(ref[i]) * s[i];
    }
    EXPECT_NEAR(std::norm(overlap), 1.0, 1e-12);
  }
}

TEST(RunCircuit, LengthMismatch) {
  const CircuitSpec spec = build_ansatz(AnsatzKind::kCircuitBlock, 2, 1);
  std::vector<double> z(2, 0.0), th(spec.param_count, 0.0);
  EXPECT_THROW(run_circuit(spec, std::vector<double>(3), th), std::invalid_argument);
  EXPECT_THROW(run_circuit(spec, z, std::vector<double>(1)), std::invalid_argument);
  EXPECT_THROW(circuit_gradients(spec, z, std::vector<double>(1)), std::invalid_argument);
}

TEST(RunCircuit, Deterministic) {
  const CircuitSpec spec = build_ansatz(AnsatzKind::kAllToAll, 4, 2);
  std::mt19937_64 rng(3);
  const auto z = oracle::uniform_vector(4, -1, 1, rng);
  const auto th = oracle::uniform_vector(spec.param_count, 0, 6, rng);
  const StateVector a = run_circuit(spec, z, th);
  const StateVector b = run_circuit(spec, z, th);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(ExpectationsZ, BasisAndRotations) {
  StateVector s(3);
  for (double e : expectations_z(s)) EXPECT_EQ(e, 1.0);

  apply_gate(s, Gate::trainable(GateKind::kRX, 0, 0), kPi);
  auto e = expectations_z(s);
  EXPECT_NEAR(e[0], -1.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0, 1e-15);
  EXPECT_NEAR(e[2], 1.0, 1e-15);

  StateVector t(3);
  apply_gate(t, Gate::trainable(GateKind::kRY, 0, 0), kPi / 2);
  EXPECT_NEAR(expectations_z(t)[0], 0.0, 1e-12);
}

TEST(ExpectationsZ, Bounded) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector s = random_state(5, rng);
    for (double e : expectations_z(s)) {
      EXPECT_GE(e, -1.0);
      EXPECT_LE(e, 1.0);
    }
  }
}

CircuitSpec single_ry() {
  CircuitSpec spec;
  spec.n_qubits = 1;
  spec.gates = {Gate::trainable(GateKind::kRY, 0, 0)};
  spec.param_count = 1;
  spec.encoder_slots = {};
  return spec;
}

TEST(CircuitGradients, SingleRyAnalytic) {
  const CircuitSpec spec = single_ry();
  const double z[] = {0.0};
  for (double th : {0.0, 0.3, 1.2, -2.5, kPi}) {
    const double p[] = {th};
    const auto jac = circuit_gradients(spec, z, p);
    EXPECT_NEAR(jac.d_params(0, 0), -std::sin(th), 1e-14);
  }
  const double p0[] = {0.0};
  EXPECT_EQ(circuit_gradients(spec, z, p0).d_params(0, 0), 0.0);
}

void expect_matches_finite_differences(const CircuitSpec& spec, std::mt19937_64& rng) {
  const int n = spec.n_qubits;
  const auto z = oracle::uniform_vector(n, -kPi, kPi, rng);
  const auto th = oracle::uniform_vector(spec.param_count, 0, 2 * kPi, rng);
  const CircuitJacobian jac = circuit_gradients(spec, z, th);
  for (int v = 0; v < n; ++v) {
    for (int p = 0; p < spec.param_count; ++p) {
      const double fd = oracle::central_diff(
          [&](std::vector<double>& x) { return expectations_z(run_circuit(spec, z, x))[v]; },
          th, p);
      EXPECT_TRUE(oracle::grad_close(jac.d_params(v, p), fd, 1e-5, 1e-7))
          << "v=" << v << " p=" << p << " adjoint=" << jac.d_params(v, p) << " fd=" << fd;
    }
    for (int i = 0; i < n; ++i) {
      const double fd = oracle::central_diff(
          [&](std::vector<double>& x) { return expectations_z(run_circuit(spec, x, th))[v]; },
          z, i);
      EXPECT_TRUE(oracle::grad_close(jac.d_inputs(v, i), fd, 1e-5, 1e-7))
          << "v=" << v << " input=" << i;
    }
  }
}

TEST(CircuitGradients, CircuitBlockFourQubitsMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  expect_matches_finite_differences(build_ansatz(AnsatzKind::kCircuitBlock, 4, 2), rng);
}

TEST(CircuitGradients, AllAnsaetzeMatchFiniteDifferences) {
  std::mt19937_64 rng(22);
  for (AnsatzKind kind : {AnsatzKind::kNearestNeighbour, AnsatzKind::kAllToAll,
                          AnsatzKind::kCircuitBlock}) {
    for (int n = 2; n <= 6; n += 2) {
      for (int depth = 1; depth <= 2; ++depth) {
        expect_matches_finite_differences(build_ansatz(kind, n, depth), rng);
      }
    }
  }
}

TEST(CircuitGradients, FullGateAlphabetMatchesFiniteDifferences) {
  CircuitSpec spec;
  spec.n_qubits = 3;
  spec.gates = build_encoder(3);
  int p = 0;
  spec.gates.push_back(Gate::fixed(GateKind::kH, 1));
  spec.gates.push_back(Gate::trainable(GateKind::kRZ, 0, p++));
  spec.gates.push_back(Gate::trainable(GateKind::kCRZ, 2, p++, 1));
  spec.gates.push_back(Gate::fixed(GateKind::kCNOT, 0, 2));
  spec.gates.push_back(Gate::trainable(GateKind::kRX, 1, p++));
  spec.gates.push_back(Gate::trainable(GateKind::kCRX, 0, p++, 1));
  spec.gates.push_back(Gate::fixed(GateKind::kH, 2));
  spec.gates.push_back(Gate::trainable(GateKind::kRY, 2, p++));
  spec.param_count = p;
  std::mt19937_64 rng(5);
  expect_matches_finite_differences(spec, rng);
}

TEST(CircuitGradients, ParameterShiftAgreesOnSingleRotations) {
  std::mt19937_64 rng(8);
  for (GateKind kind : {GateKind::kRX, GateKind::kRY, GateKind::kRZ}) {
    // H first so RZ has a non-trivial derivative; RY afterwards exposes it in Z.
    CircuitSpec spec;
    spec.n_qubits = 1;
    spec.gates = {Gate::fixed(GateKind::kH, 0), Gate::trainable(kind, 0, 0),
                  Gate::fixed(GateKind::kH, 0)};
    spec.param_count = 1;
    const double z[] = {0.0};
    for (int trial = 0; trial < 5; ++trial) {
      const double th = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
      auto f = [&](double t) {
        const double p[] = {t};
        return expectations_z(run_circuit(spec, z, p))[0];
      };
      const double shift = (f(th + kPi / 2) - f(th - kPi / 2)) / 2;
      const double p[] = {th};
      EXPECT_NEAR(circuit_gradients(spec, z, p).d_params(0, 0), shift, 1e-9);
    }
  }
}

TEST(CircuitVjp, EqualsWeightedJacobianRows) {
  const CircuitSpec spec = build_ansatz(AnsatzKind::kNearestNeighbour, 3, 2);
  std::mt19937_64 rng(13);
  const auto z = oracle::uniform_vector(3, -1, 1, rng);
  const auto th = oracle::uniform_vector(spec.param_count, 0, 6, rng);
  const auto w = oracle::uniform_vector(3, -2, 2, rng);
  const CircuitVjp vjp = circuit_vjp(spec, z, th, w);
  const CircuitJacobian jac = circuit_gradients(spec, z, th);
  for (int p = 0; p < spec.param_count; ++p) {
    double ref = 0;
    for (int v = 0; v < 3; ++v) ref += w[v] * jac.d_params(v, p);
    EXPECT_NEAR(vjp.d_params[p], ref, 1e-12);
  }
  for (int i = 0; i < 3; ++i) {
    double ref = 0;
    for (int v = 0; v < 3; ++v) ref += w[v] * jac.d_inputs(v, i);
    EXPECT_NEAR(vjp.d_inputs[i], ref, 1e-12);
  }
}

}  // namespace
}  // namespace qasdon
