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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qasdon/operator_net.hpp"
#include "qasdon/pde_data.hpp"
#include "qasdon/training.hpp"

namespace qasdon {

// Everything a run needs. Loaded from a flat "key = value" text file; '#'
// starts a comment. Keys are listed in README.md.
struct RunConfig {
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  std::uint64_t seed = 0;
  bool checkpoint_every_eval = false;

  // Cross-module consistency (r | d, r | p, d = sensors_per_side^2, ...).
  void validate() const;
  // Propagates `seed` into the data and training sub-configs.
  void set_seed(std::uint64_t s);
};

// Throws std::invalid_argument with the offending line and key.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace qasdon
