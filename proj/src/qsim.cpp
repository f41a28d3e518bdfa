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
#include <stdexcept>
#include <string>

namespace qasdon {
namespace {

struct Mat2 {
  Complex m00, m01, m10, m11;
};

Mat2 single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kCRX:
      return {c, Complex(0, -s), Complex(0, -s), c};
    case GateKind::kRY:
      return {c, -s, s, c};
    case GateKind::kRZ:
    case GateKind::kCRZ:
      return {Complex(c, -s), 0.0, 0.0, Complex(c, s)};
    case GateKind::kCNOT:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      return {r, r, r, -r};
    }
  }
  throw std::logic_error("unhandled gate kind");
}

void apply_matrix(std::span<Complex> amps, const Mat2& m, int target,
                  std::optional<int> control) {
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t cbit = control ? std::size_t{1} << *control : 0;
  const std::size_t n = amps.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i & tbit) continue;
    if (cbit && !(i & cbit)) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | tbit];
    amps[i] = m.m00 * a0 + m.m01 * a1;
    amps[i | tbit] = m.m10 * a0 + m.m11 * a1;
  }
}

void check_angle(const Gate& gate, const std::optional<double>& angle) {
  if (is_parameterized(gate.kind) && !angle) {
    throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                " requires an angle");
  }
  if (!is_parameterized(gate.kind) && angle) {
    throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                " takes no angle");
  }
}

// Im<lambda| G |phi> where G is the generator of the rotation (X, Y or Z on
// the target, restricted to control = 1 for controlled rotations).
double generator_overlap_imag(std::span<const Complex> lambda,
                              std::span<const Complex> phi, const Gate& gate) {
  const std::size_t tbit = std::size_t{1} << gate.target;
  const std::size_t cbit = gate.control ? std::size_t{1} << *gate.control : 0;
  Complex acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i & tbit) continue;
    if (cbit && !(i & cbit)) continue;
    const std::size_t j = i | tbit;
    const Complex l0 = std::conj(lambda[i]);
    const Complex l1 = std::conj(lambda[j]);
    switch (gate.kind) {
      case GateKind::kRX:
      case GateKind::kCRX:
        acc += l0 * phi[j] + l1 * phi[i];
        break;
      case GateKind::kRY:
        acc += l0 * Complex(0, -1) * phi[j] + l1 * Complex(0, 1) * phi[i];
        break;
      case GateKind::kRZ:
      case GateKind::kCRZ:
        acc += l0 * phi[i] - l1 * phi[j];
        break;
      default:
        throw std::logic_error("gate has no generator");
    }
  }
  return acc.imag();
}

void check_lengths(const CircuitSpec& spec, std::span<const double> inputs,
                   std::span<const double> params) {
  if (inputs.size() != static_cast<std::size_t>(spec.n_qubits)) {
    throw std::invalid_argument("circuit expects " +
                                std::to_string(spec.n_qubits) +
                                " inputs, got " + std::to_string(inputs.size()));
  }
  if (params.size() != static_cast<std::size_t>(spec.param_count)) {
    throw std::invalid_argument(
        "circuit expects " + std::to_string(spec.param_count) +
        " parameters, got " + std::to_string(params.size()));
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw std::invalid_argument("qubit count out of range");
  }
  amps_.assign(std::size_t{1} << n_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > 30 ||
      amps_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^n_qubits");
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

void apply_gate(StateVector& state, const Gate& gate,
                std::optional<double> angle) {
  validate_gate(gate, state.n_qubits());
  check_angle(gate, angle);
  apply_matrix(state.amplitudes(), single_qubit_matrix(gate.kind, angle.value_or(0.0)),
               gate.target, gate.control);
}

void apply_gate_inverse(StateVector& state, const Gate& gate,
                        std::optional<double> angle) {
  validate_gate(gate, state.n_qubits());
  check_angle(gate, angle);
  // H and CNOT are self-inverse; rotations invert by negating the angle.
  apply_matrix(state.amplitudes(),
               single_qubit_matrix(gate.kind, -angle.value_or(0.0)),
               gate.target, gate.control);
}

std::optional<double> resolve_angle(const Gate& gate,
                                    std::span<const double> inputs,
                                    std::span<const double> params) {
  switch (gate.source) {
    case AngleSource::kNone:
      return std::nullopt;
    case AngleSource::kParam:
      if (gate.slot < 0 || static_cast<std::size_t>(gate.slot) >= params.size()) {
        throw std::out_of_range("parameter slot out of range");
      }
      return params[gate.slot];
    case AngleSource::kInput:
      if (gate.slot < 0 || static_cast<std::size_t>(gate.slot) >= inputs.size()) {
        throw std::out_of_range("input slot out of range");
      }
      return inputs[gate.slot];
  }
  return std::nullopt;
}

StateVector run_circuit(const CircuitSpec& spec, std::span<const double> inputs,
                        std::span<const double> params) {
  check_lengths(spec, inputs, params);
  StateVector state(spec.n_qubits);
  for (const Gate& g : spec.gates) {
    apply_gate(state, g, resolve_angle(g, inputs, params));
  }
  return state;
}

std::vector<double> expectations_z(const StateVector& state) {
  const int n = state.n_qubits();
  std::vector<double> out(n, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    for (int v = 0; v < n; ++v) {
      out[v] += (i >> v) & 1 ? -p : p;
    }
  }
  return out;
}

CircuitVjp circuit_vjp(const CircuitSpec& spec, std::span<const double> inputs,
                       std::span<const double> params,
                       std::span<const double> weights,
                       const StateVector& final_state) {
  check_lengths(spec, inputs, params);
  if (weights.size() != static_cast<std::size_t>(spec.n_qubits)) {
    throw std::invalid_argument("one weight per qubit expected");
  }
  CircuitVjp out;
  out.expectations = expectations_z(final_state);
  out.d_params.assign(params.size(), 0.0);
  out.d_inputs.assign(inputs.size(), 0.0);

  StateVector phi = final_state;
  StateVector lambda = final_state;
  {
    auto l = lambda.amplitudes();
    for (std::size_t i = 0; i < l.size(); ++i) {
      double w = 0.0;
      for (int v = 0; v < spec.n_qubits; ++v) {
        w += (i >> v) & 1 ? -weights[v] : weights[v];
      }
      l[i] *= w;
    }
  }

  for (auto it = spec.gates.rbegin(); it != spec.gates.rend(); ++it) {
    const Gate& g = *it;
    const auto angle = resolve_angle(g, inputs, params);
    if (angle) {
      const double d =
          generator_overlap_imag(lambda.amplitudes(), phi.amplitudes(), g);
      if (g.source == AngleSource::kParam) {
        out.d_params[g.slot] += d;
      } else {
        out.d_inputs[g.slot] += d;
      }
    }
    apply_gate_inverse(phi, g, angle);
    apply_gate_inverse(lambda, g, angle);
  }
  return out;
}

CircuitVjp circuit_vjp(const CircuitSpec& spec, std::span<const double> inputs,
                       std::span<const double> params,
                       std::span<const double> weights) {
  return circuit_vjp(spec, inputs, params, weights,
                     run_circuit(spec, inputs, params));
}

CircuitJacobian circuit_gradients(const CircuitSpec& spec,
                                  std::span<const double> inputs,
                                  std::span<const double> params) {
  const StateVector final_state = run_circuit(spec, inputs, params);
  const int n = spec.n_qubits;
  CircuitJacobian jac{Matrix(n, params.size()), Matrix(n, inputs.size())};
  std::vector<double> weights(n, 0.0);
  for (int v = 0; v < n; ++v) {
    weights.assign(n, 0.0);
    weights[v] = 1.0;
    const CircuitVjp row = circuit_vjp(spec, inputs, params, weights, final_state);
    std::copy(row.d_params.begin(), row.d_params.end(), jac.d_params.row(v).begin());
    std::copy(row.d_inputs.begin(), row.d_inputs.end(), jac.d_inputs.row(v).begin());
  }
  return jac;
}

}  // namespace qasdon
