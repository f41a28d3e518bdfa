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

#include "qasdon/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qasdon/container.hpp"
#include "qasdon/parallel.hpp"
#include "qasdon/training.hpp"

namespace qasdon {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig load_with_overrides(const std::filesystem::path& path,
                              const CommonOptions& opts) {
  RunConfig cfg = load_run_config(path);
  if (opts.seed) cfg.set_seed(*opts.seed);
  cfg.train.threads = opts.threads;
  return cfg;
}

nlohmann::json artifact_stamp(const RunConfig& cfg) {
  return {{"code_version", QASDON_VERSION}, {"config", to_json(cfg)}};
}

std::span<const Sample> select_split(const Dataset& ds, const std::string& split) {
  if (split == "test") return ds.test();
  if (split == "train") return ds.train();
  if (split == "all") return ds.samples;
  throw std::invalid_argument("unknown split '" + split + "'");
}

void check_compatible(const ModelConfig& model, const DataConfig& data) {
  if (model.sensors != data.sensor_count()) {
    throw std::invalid_argument("model expects " + std::to_string(model.sensors) +
                                " sensors but dataset has " +
                                std::to_string(data.sensor_count()));
  }
}

}  // namespace

OperatorModel build_initialized_model(const RunConfig& cfg) {
  OperatorModel model = make_model(cfg.model);
  Rng rng = make_stream(cfg.seed, "init");
  initialize(model, rng);
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const RunConfig& cfg,
                     const OperatorModel& model, const nlohmann::json& extra) {
  Container c;
  c.magic = kCheckpointMagic;
  c.header = artifact_stamp(cfg);
  c.header["format"] = "qasdon-checkpoint";
  c.header["version"] = 1;
  c.header["parameter_count"] = count_parameters(model).total;
  if (!extra.is_null()) c.header["extra"] = extra;
  c.arrays.emplace_back("parameters", flatten_parameters(model));
  write_container(path, c);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const Container c = read_container(path, kCheckpointMagic);
  Checkpoint ck;
  ck.header = c.header;
  ck.config = run_config_from_json(c.header.at("config"));
  ck.model = make_model(ck.config.model);
  assign_parameters(ck.model, c.array("parameters"));
  return ck;
}

void cmd_gen_data(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_path, const CommonOptions& opts,
                  std::ostream& out) {
  const RunConfig cfg = load_with_overrides(config_path, opts);
  Dataset ds = build_dataset(cfg.data, opts.threads);
  ds.metadata = artifact_stamp(cfg);
  write_dataset(out_path, ds);
  out << "samples=" << ds.samples.size() << " train=" << cfg.data.n_train
      << " test=" << cfg.data.n_test << " d=" << cfg.data.sensor_count()
      << " grid=" << cfg.data.grf.grid << " equation=" << equation_name(cfg.data.equation)
      << " seed=" << cfg.data.seed << "\n";
}

void cmd_train(const std::filesystem::path& config_path,
               const std::filesystem::path& data_path,
               const std::filesystem::path& out_dir, const CommonOptions& opts,
               std::ostream& out) {
  RunConfig cfg = load_with_overrides(config_path, opts);
  const Dataset ds = read_dataset(data_path);
  check_compatible(cfg.model, ds.config);
  // The dataset is authoritative for everything about the data.
  const std::uint64_t seed = cfg.seed;
  cfg.data = ds.config;
  cfg.set_seed(seed);
  cfg.validate();

  std::filesystem::create_directories(out_dir);
  OperatorModel model = build_initialized_model(cfg);
  const ParameterCount pc = count_parameters(model);
  {
    nlohmann::json report = artifact_stamp(cfg);
    report["total"] = pc.total;
    report["by_component"] = pc.by_component;
    std::ofstream os(out_dir / "params.json");
    os << report.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write params.json");
  }

  const std::string stamp = to_json(cfg).dump();
  std::ofstream log(out_dir / "train_log.csv");
  if (!log) throw std::runtime_error("cannot write train_log.csv");
  log << "# config: " << stamp << "\n";
  log << "# code_version: " << QASDON_VERSION << "\n";
  log << "epoch,lr,train_loss,test_rel_l2\n";

  auto on_eval = [&](const LogRow& row, const OperatorModel& m) {
    log << row.epoch << ',' << fmt(row.lr) << ',' << fmt(row.train_loss) << ','
        << fmt(row.test_rel_l2) << "\n";
    log.flush();
    out << "epoch=" << row.epoch << " lr=" << fmt(row.lr)
        << " train_loss=" << fmt(row.train_loss)
        << " test_rel_l2=" << fmt(row.test_rel_l2) << "\n";
    if (cfg.checkpoint_every_eval) {
      save_checkpoint(out_dir / ("checkpoint_epoch_" + std::to_string(row.epoch) + ".qas"),
                      cfg, m, {{"epoch", row.epoch}});
    }
  };
  const TrainResult result = train(model, ds, cfg.train, on_eval);

  nlohmann::json extra = {{"epochs", cfg.train.epochs}};
  if (!result.log.empty()) {
    const LogRow& last = result.log.back();
    extra["final_train_loss"] = last.train_loss;
    extra["final_test_rel_l2"] = last.test_rel_l2;
  }
  save_checkpoint(out_dir / "checkpoint.qas", cfg, model, extra);
  out << "parameters=" << pc.total << " checkpoint=" << (out_dir / "checkpoint.qas").string()
      << "\n";
}

void cmd_eval(const std::filesystem::path& ckpt_path,
              const std::filesystem::path& data_path,
              const std::filesystem::path& out_path, const EvalOptions& eval,
              const CommonOptions& opts, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(ckpt_path);
  const Dataset ds = read_dataset(data_path);
  check_compatible(ck.config.model, ds.config);
  const auto samples = select_split(ds, eval.split);
  if (samples.empty()) throw std::invalid_argument("split '" + eval.split + "' is empty");

  const EvalMetrics m = evaluate(ck.model, samples, opts.threads);
  out << "split=" << eval.split << " samples=" << samples.size() << " mse=" << fmt(m.mse)
      << " relative_l2=" << fmt(m.relative_l2)
      << " relative_l2_percent=" << fmt(100.0 * m.relative_l2) << "\n";

  for (double t : eval.times) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("export times must lie in [0, 1]");
  }
  std::vector<double> times = eval.times;
  std::sort(times.begin(), times.end());

  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot write '" + out_path.string() + "'");
  os << "# config: " << to_json(ck.config).dump() << "\n";
  os << "# split: " << eval.split << " relative_l2: " << fmt(m.relative_l2) << "\n";
  os << "sample,t,ix,iy,x,y,predicted,true\n";

  const int n = ds.config.grf.grid;
  const int count = std::min<int>(eval.export_samples, static_cast<int>(samples.size()));
  for (int s = 0; s < count; ++s) {
    Field2D u0(n);
    u0.values = samples[s].u0;
    std::vector<Field2D> truth =
        ds.config.equation == Equation::kAdvection
            ? solve_advection(u0, ds.config.vx, ds.config.vy, times)
            : solve_burgers(u0, ds.config.nu, times, ds.config.dt);
    const BranchForward b = branch_forward(ck.model.branch, samples[s].sensors);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      std::vector<double> pred(static_cast<std::size_t>(n) * n);
      parallel_for(pred.size(), opts.threads, [&](std::size_t i) {
        const Query q{static_cast<double>(i % n) / n, static_cast<double>(i / n) / n,
                      times[ti]};
        pred[i] = inner_product(b.b, trunk_forward(ck.model.trunk, q).output);
      });
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          os << s << ',' << fmt(times[ti]) << ',' << ix << ',' << iy << ','
             << fmt(static_cast<double>(ix) / n) << ',' << fmt(static_cast<double>(iy) / n)
             << ',' << fmt(pred[static_cast<std::size_t>(iy) * n + ix]) << ','
             << fmt(truth[ti].at(ix, iy)) << "\n";
        }
      }
    }
  }
  if (!os) throw std::runtime_error("write to '" + out_path.string() + "' failed");
}

}  // namespace qasdon
