#pragma once

#include <complex>
#include <vector>

namespace qasdon::detail {

// Square 2D complex FFT of side n on row-major data (row = y index).
// Plans use FFTW_ESTIMATE so the transform is reproducible run to run.
class Fft2d {
 public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const { return n_; }
  // Unnormalized forward transform, in place.
  void forward(std::vector<std::complex<double>>& data);
  // Inverse transform scaled by 1/n^2, in place.
  void inverse(std::vector<std::complex<double>>& data);

 private:
  void run(void* plan, std::vector<std::complex<double>>& data);

  int n_;
  void* buffer_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Signed wavenumber for FFT index i: 0..n/2 then -(n/2-1)..-1.
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace qasdon::detail
