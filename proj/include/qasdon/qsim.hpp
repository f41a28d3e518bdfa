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

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qasdon/circuit.hpp"
#include "qasdon/matrix.hpp"

namespace qasdon {

using Complex = std::complex<double>;

// Dense n-qubit state. Qubit 0 is the least-significant bit of the basis
// index.
class StateVector {
 public:
  // |0...0>
  explicit StateVector(int n_qubits);
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

// Applies the gate's unitary in place. `angle` must be given iff the gate is
// parameterized. Rotations follow exp(-i*theta*G/2).
void apply_gate(StateVector& state, const Gate& gate,
                std::optional<double> angle = std::nullopt);

// Applies the inverse of the gate.
void apply_gate_inverse(StateVector& state, const Gate& gate,
                        std::optional<double> angle = std::nullopt);

// Angle of `gate` under (inputs, params); nullopt for fixed gates.
std::optional<double> resolve_angle(const Gate& gate,
                                    std::span<const double> inputs,
                                    std::span<const double> params);

// U(z, theta)|0>, gates applied in program order.
StateVector run_circuit(const CircuitSpec& spec, std::span<const double> inputs,
                        std::span<const double> params);

// <Z_v> for every qubit v.
std::vector<double> expectations_z(const StateVector& state);

struct CircuitJacobian {
  Matrix d_params;  // n_qubits x param_count
  Matrix d_inputs;  // n_qubits x n_qubits
};

// Full Jacobian of all Z expectations by adjoint differentiation.
CircuitJacobian circuit_gradients(const CircuitSpec& spec,
                                  std::span<const double> inputs,
                                  std::span<const double> params);

struct CircuitVjp {
  std::vector<double> expectations;
  std::vector<double> d_params;
  std::vector<double> d_inputs;
};

// Gradient of sum_v weights[v] * <Z_v> in one forward and one reverse sweep.
CircuitVjp circuit_vjp(const CircuitSpec& spec, std::span<const double> inputs,
                       std::span<const double> params,
                       std::span<const double> weights);

// Same as above, reusing a final state from run_circuit.
CircuitVjp circuit_vjp(const CircuitSpec& spec, std::span<const double> inputs,
                       std::span<const double> params,
                       std::span<const double> weights,
                       const StateVector& final_state);

}  // namespace qasdon
