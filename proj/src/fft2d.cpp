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

#include "fft2d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace qasdon::detail {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FFT size must be >= 2");
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
  buffer_ = buf;
  forward_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(buffer_);
}

void Fft2d::run(void* plan, std::vector<std::complex<double>>& data) {
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  if (data.size() != total) throw std::invalid_argument("FFT size mismatch");
  auto* buf = reinterpret_cast<std::complex<double>*>(buffer_);
  std::copy(data.begin(), data.end(), buf);
  fftw_execute(static_cast<fftw_plan>(plan));
  std::copy(buf, buf + total, data.begin());
}

void Fft2d::forward(std::vector<std::complex<double>>& data) {
  run(forward_plan_, data);
}

void Fft2d::inverse(std::vector<std::complex<double>>& data) {
  run(inverse_plan_, data);
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  for (auto& v : data) v *= scale;
}

}  // namespace qasdon::detail
