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

#include "qasdon/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qasdon {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config field '" + key + "': cannot parse '" + value + "'");
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

template <class F>
auto wrap_enum(const std::string& key, const std::string& v, F parse) {
  try {
    return parse(v);
  } catch (const std::invalid_argument&) {
    bad_value(key, v);
  }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"equation", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.data.equation = wrap_enum(k, v, parse_equation);
       }},
      {"grid", [](RunConfig& c, auto& k, auto& v) { c.data.grf.grid = to_int(k, v); }},
      {"grf_amplitude", [](RunConfig& c, auto& k, auto& v) { c.data.grf.amplitude = to_double(k, v); }},
      {"grf_lx", [](RunConfig& c, auto& k, auto& v) { c.data.grf.lx = to_double(k, v); }},
      {"grf_ly", [](RunConfig& c, auto& k, auto& v) { c.data.grf.ly = to_double(k, v); }},
      {"grf_smoothing", [](RunConfig& c, auto& k, auto& v) { c.data.grf.smoothing = to_double(k, v); }},
      {"norm_lo", [](RunConfig& c, auto& k, auto& v) { c.data.grf.lo = to_double(k, v); }},
      {"norm_hi", [](RunConfig& c, auto& k, auto& v) { c.data.grf.hi = to_double(k, v); }},
      {"sensors_per_side", [](RunConfig& c, auto& k, auto& v) { c.data.sensors_per_side = to_int(k, v); }},
      {"queries", [](RunConfig& c, auto& k, auto& v) { c.data.queries = to_int(k, v); }},
      {"time_slices", [](RunConfig& c, auto& k, auto& v) { c.data.time_slices = to_int(k, v); }},
      {"vx", [](RunConfig& c, auto& k, auto& v) { c.data.vx = to_double(k, v); }},
      {"vy", [](RunConfig& c, auto& k, auto& v) { c.data.vy = to_double(k, v); }},
      {"nu", [](RunConfig& c, auto& k, auto& v) { c.data.nu = to_double(k, v); }},
      {"dt", [](RunConfig& c, auto& k, auto& v) { c.data.dt = to_double(k, v); }},
      {"n_train", [](RunConfig& c, auto& k, auto& v) { c.data.n_train = to_int(k, v); }},
      {"n_test", [](RunConfig& c, auto& k, auto& v) { c.data.n_test = to_int(k, v); }},
      {"ansatz", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.ansatz = wrap_enum(k, v, parse_ansatz);
       }},
      {"qubits", [](RunConfig& c, auto& k, auto& v) { c.model.qubits = to_int(k, v); }},
      {"depth", [](RunConfig& c, auto& k, auto& v) { c.model.depth = to_int(k, v); }},
      {"hidden", [](RunConfig& c, auto& k, auto& v) { c.model.hidden = to_int(k, v); }},
      {"subnets", [](RunConfig& c, auto& k, auto& v) { c.model.subnets = to_int(k, v); }},
      {"latent", [](RunConfig& c, auto& k, auto& v) { c.model.latent = to_int(k, v); }},
      {"gamma", [](RunConfig& c, auto& k, auto& v) { c.model.gamma = to_double(k, v); }},
      {"eca_b", [](RunConfig& c, auto& k, auto& v) { c.model.eca_b = to_double(k, v); }},
      {"padding", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.padding = wrap_enum(k, v, parse_padding);
       }},
      {"gate_mode", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.gate_mode = wrap_enum(k, v, parse_gate_mode);
       }},
      {"slicing", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.slicing = wrap_enum(k, v, parse_slicing);
       }},
      {"outer_activation", [](RunConfig& c, auto& k, auto& v) { c.model.outer_activation = to_bool(k, v); }},
      {"lr", [](RunConfig& c, auto& k, auto& v) { c.train.lr0 = to_double(k, v); }},
      {"schedule", [](RunConfig& c, auto&, auto& v) { c.train.schedule = parse_schedule(v); }},
      {"epochs", [](RunConfig& c, auto& k, auto& v) { c.train.epochs = to_int(k, v); }},
      {"eval_every", [](RunConfig& c, auto& k, auto& v) { c.train.eval_every = to_int(k, v); }},
      {"batch_size", [](RunConfig& c, auto& k, auto& v) { c.train.batch_size = to_int(k, v); }},
      {"queries_per_step", [](RunConfig& c, auto& k, auto& v) { c.train.queries_per_sample = to_int(k, v); }},
      {"checkpoint_every_eval", [](RunConfig& c, auto& k, auto& v) { c.checkpoint_every_eval = to_bool(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.set_seed(to_u64(k, v)); }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  data.validate();
  model.validate();
  train.validate();
  if (model.sensors != data.sensor_count()) {
    throw std::invalid_argument("config field 'sensors_per_side': model expects " +
                                std::to_string(model.sensors) + " sensors");
  }
  if (model.query_dim != 3) {
    throw std::invalid_argument("config field 'query_dim': must be 3 for (x, y, t)");
  }
}

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  data.seed = s;
  train.seed = s;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("config field '" + key + "': given twice");
    }
    it->second(cfg, key, value);
  }
  // Correlation lengths default per equation.
  if (cfg.data.equation == Equation::kBurgers) {
    if (!seen.count("grf_lx")) cfg.data.grf.lx = 0.4;
    if (!seen.count("grf_ly")) cfg.data.grf.ly = 0.4;
  }
  cfg.model.sensors = cfg.data.sensor_count();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str());
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j = to_json(cfg.data);
  const ModelConfig& m = cfg.model;
  j["ansatz"] = ansatz_name(m.ansatz);
  j["qubits"] = m.qubits;
  j["depth"] = m.depth;
  j["hidden"] = m.hidden;
  j["subnets"] = m.subnets;
  j["latent"] = m.latent;
  j["gamma"] = m.gamma;
  j["eca_b"] = m.eca_b;
  j["padding"] = padding_name(m.padding);
  j["gate_mode"] = gate_mode_name(m.gate_mode);
  j["slicing"] = slicing_name(m.slicing);
  j["outer_activation"] = m.outer_activation;
  const TrainConfig& t = cfg.train;
  j["lr"] = t.lr0;
  j["schedule"] = format_schedule(t.schedule);
  j["epochs"] = t.epochs;
  j["eval_every"] = t.eval_every;
  j["batch_size"] = t.batch_size;
  j["queries_per_step"] = t.queries_per_sample;
  j["checkpoint_every_eval"] = cfg.checkpoint_every_eval;
  j["seed"] = cfg.seed;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.data = data_config_from_json(j);
  ModelConfig& m = cfg.model;
  m.ansatz = parse_ansatz(j.at("ansatz").get<std::string>());
  m.qubits = j.at("qubits").get<int>();
  m.depth = j.at("depth").get<int>();
  m.hidden = j.at("hidden").get<int>();
  m.subnets = j.at("subnets").get<int>();
  m.latent = j.at("latent").get<int>();
  m.gamma = j.at("gamma").get<double>();
  m.eca_b = j.at("eca_b").get<double>();
  m.padding = parse_padding(j.at("padding").get<std::string>());
  m.gate_mode = parse_gate_mode(j.at("gate_mode").get<std::string>());
  m.slicing = parse_slicing(j.at("slicing").get<std::string>());
  m.outer_activation = j.at("outer_activation").get<bool>();
  m.sensors = cfg.data.sensor_count();
  TrainConfig& t = cfg.train;
  t.lr0 = j.at("lr").get<double>();
  t.schedule = parse_schedule(j.at("schedule").get<std::string>());
  t.epochs = j.at("epochs").get<int>();
  t.eval_every = j.at("eval_every").get<int>();
  t.batch_size = j.at("batch_size").get<int>();
  t.queries_per_sample = j.at("queries_per_step").get<int>();
  cfg.checkpoint_every_eval = j.at("checkpoint_every_eval").get<bool>();
  cfg.set_seed(j.at("seed").get<std::uint64_t>());
  cfg.validate();
  return cfg;
}

}  // namespace qasdon
