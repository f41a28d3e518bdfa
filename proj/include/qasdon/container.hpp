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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qasdon {

// Binary artifact layout shared by datasets and checkpoints:
//
//   offset 0   8-byte ASCII magic ("QASDATA1" or "QASCKPT1")
//   offset 8   header length H, uint64 little-endian
//   offset 16  H bytes of UTF-8 JSON; "arrays" lists {name, length} in order
//   then       every array as consecutive little-endian float64 values
struct Container {
  std::string magic;
  nlohmann::json header;
  std::vector<std::pair<std::string, std::vector<double>>> arrays;

  const std::vector<double>& array(const std::string& name) const;
};

inline constexpr const char* kDatasetMagic = "QASDATA1";
inline constexpr const char* kCheckpointMagic = "QASCKPT1";

void write_container(const std::filesystem::path& path, const Container& c);
// Throws std::runtime_error on I/O failure, bad magic or truncated data.
Container read_container(const std::filesystem::path& path,
                         const std::string& expected_magic);

}  // namespace qasdon
