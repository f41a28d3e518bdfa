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

#include <vector>

#include "qasdon/circuit.hpp"

namespace qasdon {

// One RY(z_v) per qubit, reading input v.
std::vector<Gate> build_encoder(int n_qubits);

// Encoder followed by `depth` trainable blocks of the given layout.
//
//  nearest-neighbour  RX,RZ on all qubits; CNOT(i -> i-1) for i = q-1..1 and
//                     a closing CNOT(0 -> q-1); RX,RZ on all qubits.
//                     4q parameters and q entanglers per block.
//  all-to-all         RX,RZ on all qubits; CRX(i -> j) for every ordered pair
//                     i != j; RX,RZ on all qubits. q(q+3) parameters and
//                     q(q-1) entanglers per block.
//  circuit-block      RX,RZ on all qubits; ring CRX(i -> (i+1) mod q).
//                     3q parameters and q entanglers per block.
//
// Throws std::invalid_argument for n_qubits < 2 or depth < 1.
CircuitSpec build_ansatz(AnsatzKind kind, int n_qubits, int depth);

struct GateCounts {
  int params = 0;
  int two_qubit_gates = 0;
  bool operator==(const GateCounts&) const = default;
};

// Counts obtained by walking the gate list.
GateCounts count_summary(const CircuitSpec& spec);

// Closed-form counts: 4nL / n(n+3)L / 3nL and nL / n(n-1)L / nL.
GateCounts expected_counts(AnsatzKind kind, int n_qubits, int depth);

}  // namespace qasdon
