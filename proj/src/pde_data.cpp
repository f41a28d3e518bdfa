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

#include "qasdon/pde_data.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft2d.hpp"
#include "qasdon/container.hpp"
#include "qasdon/parallel.hpp"

namespace qasdon {
namespace {

using Complex = std::complex<double>;
using detail::Fft2d;
using detail::wavenumber;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<Complex> to_complex(const Field2D& f) {
  return {f.values.begin(), f.values.end()};
}

Field2D real_part(int n, const std::vector<Complex>& data, double* max_imag = nullptr) {
  Field2D f(n);
  double imag = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    f.values[i] = data[i].real();
    imag = std::max(imag, std::abs(data[i].imag()));
  }
  if (max_imag) *max_imag = imag;
  return f;
}

void check_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev)) {
      throw std::invalid_argument("solution times must be non-negative and sorted");
    }
    prev = t;
  }
}

// Right-hand side of the Burgers equation in Fourier space.
class BurgersRhs {
 public:
  BurgersRhs(int n, double nu)
      : n_(n), nu_(nu), fft_(n), dsum_(n * n), mask_(n * n), lap_(n * n),
        u_(n * n), d_(n * n) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const int nx = wavenumber(ix, n);
        const int ny = wavenumber(iy, n);
        const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
        // First derivatives drop the unpaired Nyquist mode.
        const double kx = (2 * std::abs(nx) == n) ? 0.0 : kTwoPi * nx;
        const double ky = (2 * std::abs(ny) == n) ? 0.0 : kTwoPi * ny;
        dsum_[idx] = kx + ky;
        mask_[idx] = 3 * std::abs(nx) < n && 3 * std::abs(ny) < n;
        lap_[idx] = kTwoPi * kTwoPi * (static_cast<double>(nx) * nx +
                                       static_cast<double>(ny) * ny);
      }
    }
  }

  void operator()(const std::vector<Complex>& uh, std::vector<Complex>& out) {
    const std::size_t total = uh.size();
    for (std::size_t i = 0; i < total; ++i) {
      const Complex t = mask_[i] ? uh[i] : Complex(0.0);
      u_[i] = t;
      d_[i] = Complex(0.0, dsum_[i]) * t;
    }
    fft_.inverse(u_);
    fft_.inverse(d_);
    for (std::size_t i = 0; i < total; ++i) u_[i] = u_[i].real() * d_[i].real();
    fft_.forward(u_);
    out.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      out[i] = -(mask_[i] ? u_[i] : Complex(0.0)) - nu_ * lap_[i] * uh[i];
    }
  }

  Fft2d& fft() { return fft_; }

 private:
  int n_;
  double nu_;
  Fft2d fft_;
  std::vector<double> dsum_;
  std::vector<bool> mask_;
  std::vector<double> lap_;
  std::vector<Complex> u_, d_;
};

double spectral_energy(const std::vector<Complex>& uh, int n) {
  double s = 0.0;
  for (const Complex& c : uh) s += std::norm(c);
  const double n2 = static_cast<double>(n) * n;
  return 0.5 * s / (n2 * n2);
}

}  // namespace

Field2D Field2D::from_function(int n, const std::function<double(double, double)>& f) {
  Field2D out(n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      out.at(ix, iy) = f(static_cast<double>(ix) / n, static_cast<double>(iy) / n);
    }
  }
  return out;
}

double Field2D::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double Field2D::energy() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return 0.5 * s / static_cast<double>(values.size());
}

void GrfConfig::validate() const {
  if (!is_power_of_two(grid) || grid < 4) {
    throw std::invalid_argument("config field 'grid': must be a power of two >= 4");
  }
  if (!(lx > 0) || !(ly > 0)) {
    throw std::invalid_argument("config field 'grf_lx/grf_ly': must be positive");
  }
  if (!(amplitude > 0)) {
    throw std::invalid_argument("config field 'grf_amplitude': must be positive");
  }
  if (!(smoothing >= 0)) {
    throw std::invalid_argument("config field 'grf_smoothing': must be >= 0");
  }
  if (!(lo < hi)) throw std::invalid_argument("config field 'norm_lo': must be < norm_hi");
}

double grf_spectral_density(const GrfConfig& cfg, double kx, double ky) {
  const double a = kx * cfg.lx;
  const double b = ky * cfg.ly;
  return cfg.amplitude * std::exp(-(a * a + b * b) / 2.0);
}

GrfDraw sample_grf_unnormalized(const GrfConfig& cfg, Rng& rng) {
  cfg.validate();
  const int n = cfg.grid;
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<Complex> spec(static_cast<std::size_t>(n) * n);

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
      const std::size_t partner =
          static_cast<std::size_t>((n - iy) % n) * n + (n - ix) % n;
      if (partner < idx) continue;  // filled as the conjugate of an earlier mode
      const double nx = wavenumber(ix, n);
      const double ny = wavenumber(iy, n);
      double mag = std::sqrt(grf_spectral_density(cfg, kTwoPi * nx, kTwoPi * ny));
      if (cfg.smoothing > 0) {
        const double sx = kTwoPi * nx * cfg.smoothing / n;
        const double sy = kTwoPi * ny * cfg.smoothing / n;
        mag *= std::exp(-0.5 * (sx * sx + sy * sy));
      }
      const double phi = phase(rng);
      if (partner == idx) {
        spec[idx] = mag * std::cos(phi);
      } else {
        spec[idx] = std::polar(mag, phi);
        spec[partner] = std::conj(spec[idx]);
      }
    }
  }
  Fft2d fft(n);
  fft.inverse(spec);
  // Unit-variance-ish scale independent of n.
  for (auto& c : spec) c *= static_cast<double>(n);
  GrfDraw draw;
  draw.field = real_part(n, spec, &draw.max_imag);
  return draw;
}

Field2D normalize_range(const Field2D& f, double lo, double hi) {
  const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
  const double lo_v = *mn;
  const double hi_v = *mx;
  if (!(hi_v > lo_v)) throw SolverError("cannot normalize a constant field");
  Field2D out(f.n);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double t = (f.values[i] - lo_v) / (hi_v - lo_v);
    // Exact at both ends: t = 0 gives lo, t = 1 gives hi.
    out.values[i] = lo * (1.0 - t) + hi * t;
  }
  return out;
}

Field2D sample_grf(const GrfConfig& cfg, Rng& rng) {
  return normalize_range(sample_grf_unnormalized(cfg, rng).field, cfg.lo, cfg.hi);
}

Field2D sample_grf(const GrfConfig& cfg) {
  Rng rng = make_stream(cfg.seed, "grf");
  return sample_grf(cfg, rng);
}

std::vector<Field2D> solve_advection(const Field2D& u0, double vx, double vy,
                                     std::span<const double> times) {
  check_times(times);
  const int n = u0.n;
  Fft2d fft(n);
  std::vector<Complex> uh = to_complex(u0);
  fft.forward(uh);

  std::vector<Field2D> out;
  out.reserve(times.size());
  std::vector<Complex> work(uh.size());
  for (double t : times) {
    if (t == 0.0) {
      out.push_back(u0);
      continue;
    }
    for (int iy = 0; iy < n; ++iy) {
      const double ny = wavenumber(iy, n);
      for (int ix = 0; ix < n; ++ix) {
        const double nx = wavenumber(ix, n);
        const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
        work[idx] = uh[idx] * std::polar(1.0, -kTwoPi * (nx * vx + ny * vy) * t);
      }
    }
    fft.inverse(work);
    out.push_back(real_part(n, work));
  }
  return out;
}

Field2D solve_advection(const Field2D& u0, double vx, double vy, double t) {
  const double times[] = {t};
  return std::move(solve_advection(u0, vx, vy, times).front());
}

double burgers_max_dt(const Field2D& u0, double nu) {
  const int n = u0.n;
  double umax = 0.0;
  for (double v : u0.values) umax = std::max(umax, std::abs(v));
  const double kmax = std::numbers::pi * n;
  const double kdeal = kTwoPi * ((n - 1) / 3);
  const double rate = nu * 2.0 * kmax * kmax + 2.0 * umax * kdeal;
  return rate > 0 ? 2.5 / rate : std::numeric_limits<double>::infinity();
}

std::vector<Field2D> solve_burgers(const Field2D& u0, double nu,
                                   std::span<const double> times, double dt,
                                   BurgersStats* stats) {
  check_times(times);
  if (!(nu >= 0)) throw std::invalid_argument("viscosity must be >= 0");
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  const double dt_max = burgers_max_dt(u0, nu);
  if (dt > dt_max) {
    throw std::invalid_argument("time step " + std::to_string(dt) +
                                " exceeds the RK4 stability bound " +
                                std::to_string(dt_max));
  }
  const int n = u0.n;
  BurgersRhs rhs(n, nu);
  std::vector<Complex> uh = to_complex(u0);
  rhs.fft().forward(uh);

  const std::size_t total = uh.size();
  std::vector<Complex> k1, k2, k3, k4, stage(total);
  double energy = spectral_energy(uh, n);
  if (stats) {
    stats->energy.assign(1, energy);
    stats->steps = 0;
  }

  std::vector<Field2D> out;
  out.reserve(times.size());
  double now = 0.0;
  long step = 0;
  for (double t : times) {
    const double span_t = t - now;
    const long steps = span_t > 0 ? static_cast<long>(std::ceil(span_t / dt - 1e-9)) : 0;
    for (long s = 0; s < steps; ++s) {
      const double h = span_t / static_cast<double>(steps);
      rhs(uh, k1);
      for (std::size_t i = 0; i < total; ++i) stage[i] = uh[i] + 0.5 * h * k1[i];
      rhs(stage, k2);
      for (std::size_t i = 0; i < total; ++i) stage[i] = uh[i] + 0.5 * h * k2[i];
      rhs(stage, k3);
      for (std::size_t i = 0; i < total; ++i) stage[i] = uh[i] + h * k3[i];
      rhs(stage, k4);
      for (std::size_t i = 0; i < total; ++i) {
        uh[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      ++step;
      const double e = spectral_energy(uh, n);
      if (!std::isfinite(e)) {
        throw SolverError("Burgers solver blew up at step " + std::to_string(step));
      }
      if (nu > 0 && e > energy + 1e-8) {
        throw SolverError("Burgers energy increased at step " + std::to_string(step));
      }
      energy = e;
      if (stats) stats->energy.push_back(e);
    }
    now = t;
    if (steps == 0 && out.empty() && t == 0.0) {
      out.push_back(u0);
      continue;
    }
    std::vector<Complex> phys = uh;
    rhs.fft().inverse(phys);
    out.push_back(real_part(n, phys));
  }
  if (stats) stats->steps = step;
  return out;
}

Field2D solve_burgers(const Field2D& u0, double nu, double t_end, double dt) {
  const double times[] = {t_end};
  return std::move(solve_burgers(u0, nu, times, dt).front());
}

std::string_view equation_name(Equation e) {
  return e == Equation::kAdvection ? "advection" : "burgers";
}

Equation parse_equation(std::string_view name) {
  if (name == "advection") return Equation::kAdvection;
  if (name == "burgers") return Equation::kBurgers;
  throw std::invalid_argument("unknown equation '" + std::string(name) + "'");
}

void DataConfig::validate() const {
  grf.validate();
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (sensors_per_side < 1) bad("sensors_per_side", "must be >= 1");
  if (grf.grid % sensors_per_side != 0) bad("sensors_per_side", "must divide grid");
  if (queries < 1) bad("queries", "must be >= 1");
  if (time_slices < 2) bad("time_slices", "must be >= 2");
  if (n_train < 0 || n_test < 0 || n_train + n_test < 1) {
    bad("n_train", "need at least one sample");
  }
  if (!(nu >= 0)) bad("nu", "must be >= 0");
  if (!(dt > 0)) bad("dt", "must be positive");
}

std::vector<std::array<int, 2>> sensor_indices(const DataConfig& cfg) {
  const int stride = cfg.grf.grid / cfg.sensors_per_side;
  std::vector<std::array<int, 2>> idx;
  for (int sy = 0; sy < cfg.sensors_per_side; ++sy) {
    for (int sx = 0; sx < cfg.sensors_per_side; ++sx) {
      idx.push_back({sx * stride, sy * stride});
    }
  }
  return idx;
}

std::vector<Field2D> solve_slices(const DataConfig& cfg, const Field2D& u0,
                                  int last_slice) {
  std::vector<double> times;
  for (int i = 0; i <= last_slice; ++i) times.push_back(cfg.slice_time(i));
  if (cfg.equation == Equation::kAdvection) {
    return solve_advection(u0, cfg.vx, cfg.vy, times);
  }
  return solve_burgers(u0, cfg.nu, times, cfg.dt);
}

Dataset build_dataset(const DataConfig& cfg, int threads) {
  cfg.validate();
  const int n = cfg.grf.grid;
  Dataset ds;
  ds.config = cfg;
  const auto sidx = sensor_indices(cfg);
  for (const auto& [ix, iy] : sidx) {
    ds.sensor_locations.push_back(
        {static_cast<double>(ix) / n, static_cast<double>(iy) / n});
  }
  ds.samples.resize(cfg.n_samples());

  parallel_for(ds.samples.size(), threads, [&](std::size_t s) {
    Rng rng = make_stream(cfg.seed, "data", s);
    const Field2D u0 = sample_grf(cfg.grf, rng);
    Sample& sample = ds.samples[s];
    sample.u0 = u0.values;
    for (const auto& [ix, iy] : sidx) sample.sensors.push_back(u0.at(ix, iy));

    std::uniform_int_distribution<int> cell(0, n - 1);
    std::uniform_int_distribution<int> slice(0, cfg.time_slices - 1);
    std::vector<std::array<int, 3>> picks(cfg.queries);
    int last = 0;
    for (auto& p : picks) {
      p = {cell(rng), cell(rng), slice(rng)};
      last = std::max(last, p[2]);
    }
    const std::vector<Field2D> fields = solve_slices(cfg, u0, last);
    for (const auto& [ix, iy, it] : picks) {
      sample.queries.push_back({static_cast<double>(ix) / n,
                                static_cast<double>(iy) / n, cfg.slice_time(it)});
      sample.targets.push_back(fields[it].at(ix, iy));
    }
  });
  return ds;
}

nlohmann::json to_json(const DataConfig& cfg) {
  return {
      {"equation", equation_name(cfg.equation)},
      {"grid", cfg.grf.grid},
      {"grf_amplitude", cfg.grf.amplitude},
      {"grf_lx", cfg.grf.lx},
      {"grf_ly", cfg.grf.ly},
      {"grf_smoothing", cfg.grf.smoothing},
      {"norm_lo", cfg.grf.lo},
      {"norm_hi", cfg.grf.hi},
      {"sensors_per_side", cfg.sensors_per_side},
      {"queries", cfg.queries},
      {"time_slices", cfg.time_slices},
      {"vx", cfg.vx},
      {"vy", cfg.vy},
      {"nu", cfg.nu},
      {"dt", cfg.dt},
      {"n_train", cfg.n_train},
      {"n_test", cfg.n_test},
      {"seed", cfg.seed},
  };
}

DataConfig data_config_from_json(const nlohmann::json& j) {
  DataConfig cfg;
  cfg.equation = parse_equation(j.at("equation").get<std::string>());
  cfg.grf.grid = j.at("grid").get<int>();
  cfg.grf.amplitude = j.at("grf_amplitude").get<double>();
  cfg.grf.lx = j.at("grf_lx").get<double>();
  cfg.grf.ly = j.at("grf_ly").get<double>();
  cfg.grf.smoothing = j.at("grf_smoothing").get<double>();
  cfg.grf.lo = j.at("norm_lo").get<double>();
  cfg.grf.hi = j.at("norm_hi").get<double>();
  cfg.sensors_per_side = j.at("sensors_per_side").get<int>();
  cfg.queries = j.at("queries").get<int>();
  cfg.time_slices = j.at("time_slices").get<int>();
  cfg.vx = j.at("vx").get<double>();
  cfg.vy = j.at("vy").get<double>();
  cfg.nu = j.at("nu").get<double>();
  cfg.dt = j.at("dt").get<double>();
  cfg.n_train = j.at("n_train").get<int>();
  cfg.n_test = j.at("n_test").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  const DataConfig& cfg = ds.config;
  const std::size_t count = ds.samples.size();
  Container c;
  c.magic = kDatasetMagic;
  c.header = {{"format", "qasdon-dataset"},
              {"version", 1},
              {"code_version", QASDON_VERSION},
              {"data", to_json(cfg)},
              {"metadata", ds.metadata},
              {"n_samples", count}};

  std::vector<double> loc, u0, sensors, queries, targets;
  for (const auto& p : ds.sensor_locations) loc.insert(loc.end(), p.begin(), p.end());
  for (const Sample& s : ds.samples) {
    if (s.queries.size() != static_cast<std::size_t>(cfg.queries) ||
        s.targets.size() != s.queries.size()) {
      throw std::invalid_argument("sample query/target count differs from config");
    }
    u0.insert(u0.end(), s.u0.begin(), s.u0.end());
    sensors.insert(sensors.end(), s.sensors.begin(), s.sensors.end());
    for (const Query& q : s.queries) queries.insert(queries.end(), q.begin(), q.end());
    targets.insert(targets.end(), s.targets.begin(), s.targets.end());
  }
  c.arrays = {{"sensor_locations", std::move(loc)},
              {"u0", std::move(u0)},
              {"sensors", std::move(sensors)},
              {"queries", std::move(queries)},
              {"targets", std::move(targets)}};
  write_container(path, c);
}

Dataset read_dataset(const std::filesystem::path& path) {
  const Container c = read_container(path, kDatasetMagic);
  Dataset ds;
  ds.config = data_config_from_json(c.header.at("data"));
  ds.metadata = c.header.value("metadata", nlohmann::json::object());
  const auto count = c.header.at("n_samples").get<std::size_t>();
  const std::size_t n2 = static_cast<std::size_t>(ds.config.grf.grid) * ds.config.grf.grid;
  const std::size_t d = ds.config.sensor_count();
  const std::size_t q = ds.config.queries;
  if (count != static_cast<std::size_t>(ds.config.n_samples())) {
    throw std::runtime_error("dataset sample count disagrees with its config");
  }
  const auto& loc = c.array("sensor_locations");
  const auto& u0 = c.array("u0");
  const auto& sensors = c.array("sensors");
  const auto& queries = c.array("queries");
  const auto& targets = c.array("targets");
  if (loc.size() != 2 * d || u0.size() != count * n2 || sensors.size() != count * d ||
      queries.size() != count * q * 3 || targets.size() != count * q) {
    throw std::runtime_error("dataset array sizes disagree with its config");
  }
  for (std::size_t i = 0; i < d; ++i) ds.sensor_locations.push_back({loc[2 * i], loc[2 * i + 1]});
  ds.samples.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    Sample& smp = ds.samples[s];
    smp.u0.assign(u0.begin() + s * n2, u0.begin() + (s + 1) * n2);
    smp.sensors.assign(sensors.begin() + s * d, sensors.begin() + (s + 1) * d);
    for (std::size_t k = 0; k < q; ++k) {
      const std::size_t base = (s * q + k) * 3;
      smp.queries.push_back({queries[base], queries[base + 1], queries[base + 2]});
    }
    smp.targets.assign(targets.begin() + s * q, targets.begin() + (s + 1) * q);
  }
  return ds;
}

}  // namespace qasdon
