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

#include "qasdon/circuit.hpp"

#include <stdexcept>
#include <string>

namespace qasdon {

bool is_parameterized(GateKind kind) {
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
    case GateKind::kCRX:
    case GateKind::kCRZ:
      return true;
    case GateKind::kCNOT:
    case GateKind::kH:
      return false;
  }
  return false;
}

bool is_controlled(GateKind kind) {
  return kind == GateKind::kCRX || kind == GateKind::kCRZ ||
         kind == GateKind::kCNOT;
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kCRX: return "CRX";
    case GateKind::kCRZ: return "CRZ";
    case GateKind::kCNOT: return "CNOT";
    case GateKind::kH: return "H";
  }
  return "?";
}

Gate Gate::fixed(GateKind kind, int target, std::optional<int> control) {
  return Gate{kind, target, control, AngleSource::kNone, -1};
}

Gate Gate::trainable(GateKind kind, int target, int param_slot,
                     std::optional<int> control) {
  return Gate{kind, target, control, AngleSource::kParam, param_slot};
}

Gate Gate::encoded(GateKind kind, int target, int input_slot) {
  return Gate{kind, target, std::nullopt, AngleSource::kInput, input_slot};
}

void validate_gate(const Gate& gate, int n_qubits) {
  const auto name = std::string(gate_name(gate.kind));
  if (gate.target < 0 || gate.target >= n_qubits) {
    throw std::out_of_range(name + ": target qubit " +
                            std::to_string(gate.target) + " out of range");
  }
  if (is_controlled(gate.kind) != gate.control.has_value()) {
    throw std::invalid_argument(name + ": control qubit " +
                                (gate.control ? "not allowed" : "required"));
  }
  if (gate.control) {
    if (*gate.control < 0 || *gate.control >= n_qubits) {
      throw std::out_of_range(name + ": control qubit out of range");
    }
    if (*gate.control == gate.target) {
      throw std::invalid_argument(name + ": control equals target");
    }
  }
  if (is_parameterized(gate.kind) == (gate.source == AngleSource::kNone)) {
    throw std::invalid_argument(name + ": angle slot mismatch");
  }
}

std::string_view ansatz_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::kNearestNeighbour: return "nearest-neighbour";
    case AnsatzKind::kAllToAll: return "all-to-all";
    case AnsatzKind::kCircuitBlock: return "circuit-block";
  }
  return "?";
}

AnsatzKind parse_ansatz(std::string_view name) {
  if (name == "nearest-neighbour" || name == "nearest-neighbor") {
    return AnsatzKind::kNearestNeighbour;
  }
  if (name == "all-to-all") return AnsatzKind::kAllToAll;
  if (name == "circuit-block") return AnsatzKind::kCircuitBlock;
  throw std::invalid_argument("unknown ansatz '" + std::string(name) + "'");
}

}  // namespace qasdon
