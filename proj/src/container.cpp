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

#include "qasdon/container.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qasdon {
namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xff);
    return r;
  }
  return v;
}

void write_u64(std::ostream& os, std::uint64_t v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return to_le(v);
}

}  // namespace

const std::vector<double>& Container::array(const std::string& name) const {
  for (const auto& [n, values] : arrays) {
    if (n == name) return values;
  }
  throw std::runtime_error("artifact has no array '" + name + "'");
}

void write_container(const std::filesystem::path& path, const Container& c) {
  if (c.magic.size() != 8) throw std::invalid_argument("magic must be 8 bytes");
  nlohmann::json header = c.header;
  header["arrays"] = nlohmann::json::array();
  for (const auto& [name, values] : c.arrays) {
    header["arrays"].push_back({{"name", name}, {"length", values.size()}});
  }
  const std::string text = header.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os.write(c.magic.data(), 8);
  write_u64(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, values] : c.arrays) {
    for (double v : values) write_u64(os, std::bit_cast<std::uint64_t>(v));
  }
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Container read_container(const std::filesystem::path& path,
                         const std::string& expected_magic) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  Container c;
  c.magic.resize(8);
  is.read(c.magic.data(), 8);
  if (!is || c.magic != expected_magic) {
    throw std::runtime_error("'" + path.string() + "' is not a " + expected_magic +
                             " artifact");
  }
  const std::uint64_t len = read_u64(is);
  if (!is || len > (std::uint64_t{1} << 32)) {
    throw std::runtime_error("corrupt header in '" + path.string() + "'");
  }
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw std::runtime_error("truncated header in '" + path.string() + "'");
  c.header = nlohmann::json::parse(text);
  for (const auto& entry : c.header.at("arrays")) {
    const auto n = entry.at("length").get<std::size_t>();
    std::vector<double> values(n);
    for (double& v : values) v = std::bit_cast<double>(read_u64(is));
    if (!is) throw std::runtime_error("truncated array data in '" + path.string() + "'");
    c.arrays.emplace_back(entry.at("name").get<std::string>(), std::move(values));
  }
  c.header.erase("arrays");
  return c;
}

}  // namespace qasdon
