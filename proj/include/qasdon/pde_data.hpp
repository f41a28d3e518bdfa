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

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qasdon/random.hpp"

namespace qasdon {

// Periodic field on the n x n grid over [0,1)^2; values[iy * n + ix] is the
// value at (ix / n, iy / n).
struct Field2D {
  int n = 0;
  std::vector<double> values;

  Field2D() = default;
  explicit Field2D(int n, double fill = 0.0)
      : n(n), values(static_cast<std::size_t>(n) * n, fill) {}
  static Field2D from_function(int n, const std::function<double(double, double)>& f);

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * n + ix]; }
  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * n + ix]; }
  double mean() const;
  // 1/2 * mean(u^2)
  double energy() const;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GrfConfig {
  int grid = 64;
  double amplitude = 1.0;
  double lx = 0.2;
  double ly = 0.2;
  double smoothing = 1.0;  // Gaussian stddev in grid cells; 0 disables
  double lo = -0.5;
  double hi = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// S(kx, ky) = A exp(-((kx lx)^2 + (ky ly)^2) / 2), k in radians per unit length.
double grf_spectral_density(const GrfConfig& cfg, double kx, double ky);

struct GrfDraw {
  Field2D field;          // smoothed, not yet normalized
  double max_imag = 0.0;  // largest |imaginary part| discarded after the iFFT
};

// Random-phase spectral synthesis with magnitudes sqrt(S), Hermitian symmetric,
// followed by periodic Gaussian smoothing.
GrfDraw sample_grf_unnormalized(const GrfConfig& cfg, Rng& rng);

// Affine rescale with min -> lo and max -> hi exactly. Throws SolverError for a
// constant field.
Field2D normalize_range(const Field2D& f, double lo, double hi);

// Draw seeded from cfg.seed, smoothed and normalized.
Field2D sample_grf(const GrfConfig& cfg);
Field2D sample_grf(const GrfConfig& cfg, Rng& rng);

// Exact periodic solution u0(x - vx t, y - vy t) by spectral phase shift.
Field2D solve_advection(const Field2D& u0, double vx, double vy, double t);
std::vector<Field2D> solve_advection(const Field2D& u0, double vx, double vy,
                                     std::span<const double> times);

// Largest dt accepted by the explicit RK4 Burgers integrator for this field.
double burgers_max_dt(const Field2D& u0, double nu);

struct BurgersStats {
  std::vector<double> energy;  // after every step, starting with u0
  long steps = 0;
};

// Pseudo-spectral Burgers u_t + u u_x + u u_y = nu (u_xx + u_yy) with RK4
// and the 2/3 dealiasing rule on the quadratic term. Throws SolverError on a
// non-finite state or, for nu > 0, an energy increase above 1e-8 per step.
Field2D solve_burgers(const Field2D& u0, double nu, double t_end, double dt);
std::vector<Field2D> solve_burgers(const Field2D& u0, double nu,
                                   std::span<const double> times, double dt,
                                   BurgersStats* stats = nullptr);

enum class Equation { kAdvection, kBurgers };
std::string_view equation_name(Equation e);
Equation parse_equation(std::string_view name);

struct DataConfig {
  Equation equation = Equation::kAdvection;
  GrfConfig grf;  // grf.seed is ignored; samples derive their own streams
  int sensors_per_side = 8;
  int queries = 100;
  int time_slices = 51;
  double vx = 1.0;
  double vy = 0.5;
  double nu = 0.01;
  double dt = 1e-3;
  int n_train = 500;
  int n_test = 200;
  std::uint64_t seed = 0;

  int sensor_count() const { return sensors_per_side * sensors_per_side; }
  int n_samples() const { return n_train + n_test; }
  double slice_time(int i) const { return static_cast<double>(i) / (time_slices - 1); }
  void validate() const;
};

using Query = std::array<double, 3>;  // (x, y, t)

struct Sample {
  std::vector<double> u0;       // full initial field, grid^2
  std::vector<double> sensors;  // u_s
  std::vector<Query> queries;
  std::vector<double> targets;
};

struct Dataset {
  DataConfig config;
  std::vector<std::array<double, 2>> sensor_locations;
  std::vector<Sample> samples;  // n_train training samples, then the test split
  nlohmann::json metadata;      // free-form, written into the file header

  std::span<const Sample> train() const {
    return std::span(samples).first(config.n_train);
  }
  std::span<const Sample> test() const {
    return std::span(samples).subspan(config.n_train);
  }
};

// Grid indices of the sensors, row-major over the sensor subgrid (y outer).
std::vector<std::array<int, 2>> sensor_indices(const DataConfig& cfg);

// Solution on every time slice up to and including `last_slice`.
std::vector<Field2D> solve_slices(const DataConfig& cfg, const Field2D& u0,
                                  int last_slice);

// Fully determined by (cfg, seed); samples generate in parallel.
Dataset build_dataset(const DataConfig& cfg, int threads = 1);

void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

nlohmann::json to_json(const DataConfig& cfg);
DataConfig data_config_from_json(const nlohmann::json& j);

}  // namespace qasdon
