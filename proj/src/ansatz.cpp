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

#include "qasdon/ansatz.hpp"

#include <stdexcept>

namespace qasdon {
namespace {

class Builder {
 public:
  explicit Builder(CircuitSpec& spec) : spec_(spec) {}

  void rotations(GateKind kind) {
    for (int v = 0; v < spec_.n_qubits; ++v) {
      spec_.gates.push_back(Gate::trainable(kind, v, spec_.param_count++));
    }
  }
  void controlled(GateKind kind, int control, int target) {
    if (is_parameterized(kind)) {
      spec_.gates.push_back(
          Gate::trainable(kind, target, spec_.param_count++, control));
    } else {
      spec_.gates.push_back(Gate::fixed(kind, target, control));
    }
  }

 private:
  CircuitSpec& spec_;
};

}  // namespace

std::vector<Gate> build_encoder(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("encoder needs >= 1 qubit");
  std::vector<Gate> gates;
  gates.reserve(n_qubits);
  for (int v = 0; v < n_qubits; ++v) {
    gates.push_back(Gate::encoded(GateKind::kRY, v, v));
  }
  return gates;
}

CircuitSpec build_ansatz(AnsatzKind kind, int n_qubits, int depth) {
  if (n_qubits < 2) {
    throw std::invalid_argument("ansatz needs at least 2 qubits");
  }
  if (depth < 1) throw std::invalid_argument("ansatz depth must be >= 1");

  CircuitSpec spec;
  spec.n_qubits = n_qubits;
  spec.depth = depth;
  spec.kind = kind;
  spec.gates = build_encoder(n_qubits);
  for (int v = 0; v < n_qubits; ++v) spec.encoder_slots.push_back(v);

  const int q = n_qubits;
  Builder b(spec);
  for (int layer = 0; layer < depth; ++layer) {
    b.rotations(GateKind::kRX);
    b.rotations(GateKind::kRZ);
    switch (kind) {
      case AnsatzKind::kNearestNeighbour:
        for (int i = q - 1; i >= 1; --i) b.controlled(GateKind::kCNOT, i, i - 1);
        b.controlled(GateKind::kCNOT, 0, q - 1);
        b.rotations(GateKind::kRX);
        b.rotations(GateKind::kRZ);
        break;
      case AnsatzKind::kAllToAll:
        for (int i = q - 1; i >= 0; --i) {
          for (int j = q - 1; j >= 0; --j) {
            if (i != j) b.controlled(GateKind::kCRX, i, j);
          }
        }
        b.rotations(GateKind::kRX);
        b.rotations(GateKind::kRZ);
        break;
      case AnsatzKind::kCircuitBlock:
        for (int i = 0; i < q; ++i) b.controlled(GateKind::kCRX, i, (i + 1) % q);
        break;
    }
  }
  return spec;
}

GateCounts count_summary(const CircuitSpec& spec) {
  GateCounts c;
  for (const Gate& g : spec.gates) {
    if (g.source == AngleSource::kParam) ++c.params;
    if (g.control) ++c.two_qubit_gates;
  }
  return c;
}

GateCounts expected_counts(AnsatzKind kind, int n, int depth) {
  switch (kind) {
    case AnsatzKind::kNearestNeighbour:
      return {4 * n * depth, n * depth};
    case AnsatzKind::kAllToAll:
      return {n * (n + 3) * depth, n * (n - 1) * depth};
    case AnsatzKind::kCircuitBlock:
      return {3 * n * depth, n * depth};
  }
  return {};
}

}  // namespace qasdon
