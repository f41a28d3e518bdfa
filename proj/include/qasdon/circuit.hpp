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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qasdon {

enum class GateKind { kRX, kRY, kRZ, kCRX, kCRZ, kCNOT, kH };

bool is_parameterized(GateKind kind);
bool is_controlled(GateKind kind);
std::string_view gate_name(GateKind kind);

// Where a parameterized gate reads its angle from.
enum class AngleSource { kNone, kParam, kInput };

struct Gate {
  GateKind kind = GateKind::kH;
  int target = 0;
  std::optional<int> control;
  AngleSource source = AngleSource::kNone;
  // Index into the parameter vector (kParam) or the input vector (kInput).
  int slot = -1;

  static Gate fixed(GateKind kind, int target,
                    std::optional<int> control = std::nullopt);
  static Gate trainable(GateKind kind, int target, int param_slot,
                        std::optional<int> control = std::nullopt);
  static Gate encoded(GateKind kind, int target, int input_slot);

  bool operator==(const Gate&) const = default;
};

// Throws std::invalid_argument when the gate is malformed for n_qubits.
void validate_gate(const Gate& gate, int n_qubits);

// Circuit 2, 6 and 19 of the Sim et al. expressibility taxonomy.
enum class AnsatzKind { kNearestNeighbour, kAllToAll, kCircuitBlock };

std::string_view ansatz_name(AnsatzKind kind);
// Accepts "nearest-neighbour", "all-to-all", "circuit-block".
AnsatzKind parse_ansatz(std::string_view name);

struct CircuitSpec {
  int n_qubits = 0;
  int depth = 0;
  AnsatzKind kind = AnsatzKind::kCircuitBlock;
  std::vector<Gate> gates;
  int param_count = 0;
  // encoder_slots[v] is the position in `gates` of the gate reading input v.
  std::vector<int> encoder_slots;
};

}  // namespace qasdon
