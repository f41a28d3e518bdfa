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

#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "qasdon/cli.hpp"
#include "qasdon/parallel.hpp"
#include "qasdon/pde_data.hpp"
#include "qasdon/training.hpp"

namespace {

// One machine-parsable line: "error <kind>: <message>".
int report(const std::string& kind, const std::string& what, int code) {
  std::string msg = what;
  for (char& c : msg) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error " << kind << ": " << msg << "\n";
  return code;
}

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum attentive stacked DeepONet toolkit"};
  app.require_subcommand(1);

  qasdon::CommonOptions common;
  common.threads = qasdon::default_threads();
  std::uint64_t seed = 0;
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");

  std::string config, data, out, out_dir, ckpt;
  auto* gen = app.add_subcommand("gen-data", "Generate a dataset");
  gen->add_option("--config", config)->required();
  gen->add_option("--out", out)->required();

  auto* tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--config", config)->required();
  tr->add_option("--data", data)->required();
  tr->add_option("--out-dir", out_dir)->required();

  qasdon::EvalOptions eval;
  std::string times = "0,0.5,1";
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint and export fields");
  ev->add_option("--ckpt", ckpt)->required();
  ev->add_option("--data", data)->required();
  ev->add_option("--out", out)->required();
  ev->add_option("--split", eval.split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}));
  ev->add_option("--times", times, "Comma-separated export times");
  ev->add_option("--export-samples", eval.export_samples)->check(CLI::NonNegativeNumber);

  for (auto* sub : {gen, tr, ev}) {
    sub->add_option("--threads", common.threads)->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("usage", e.what(), 2);
  }
  if (seed_opt->count() > 0 || gen->count("--seed") || tr->count("--seed") ||
      ev->count("--seed")) {
    common.seed = seed;
  }

  try {
    if (gen->parsed()) {
      qasdon::cmd_gen_data(config, out, common, std::cout);
    } else if (tr->parsed()) {
      qasdon::cmd_train(config, data, out_dir, common, std::cout);
    } else if (ev->parsed()) {
      eval.times = parse_times(times);
      qasdon::cmd_eval(ckpt, data, out, eval, common, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    return report("invalid", e.what(), 2);
  } catch (const qasdon::SolverError& e) {
    return report("solver", e.what(), 4);
  } catch (const qasdon::TrainingError& e) {
    return report("training", e.what(), 4);
  } catch (const std::exception& e) {
    return report("runtime", e.what(), 3);
  }
  return 0;
}
