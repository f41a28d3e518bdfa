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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qasdon/config.hpp"
#include "qasdon/operator_net.hpp"

namespace qasdon {

struct CommonOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  int threads = 1;
};

struct Checkpoint {
  RunConfig config;
  OperatorModel model;
  nlohmann::json header;
};

// Model built from cfg.model, initialized from the "init" stream of cfg.seed.
OperatorModel build_initialized_model(const RunConfig& cfg);

void save_checkpoint(const std::filesystem::path& path, const RunConfig& cfg,
                     const OperatorModel& model, const nlohmann::json& extra = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Writes the dataset container and prints a one-line summary.
void cmd_gen_data(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_path, const CommonOptions& opts,
                  std::ostream& out);

// Writes checkpoint.qas, train_log.csv and params.json into out_dir.
void cmd_train(const std::filesystem::path& config_path,
               const std::filesystem::path& data_path,
               const std::filesystem::path& out_dir, const CommonOptions& opts,
               std::ostream& out);

struct EvalOptions {
  std::string split = "test";           // test | train | all
  std::vector<double> times = {0.0, 0.5, 1.0};
  int export_samples = 2;
};

// Prints metrics and writes predicted vs true field grids as CSV.
void cmd_eval(const std::filesystem::path& ckpt_path,
              const std::filesystem::path& data_path,
              const std::filesystem::path& out_path, const EvalOptions& eval,
              const CommonOptions& opts, std::ostream& out);

}  // namespace qasdon
