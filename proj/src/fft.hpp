#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace fraclt::detail {

// fftw_malloc'd complex buffer; keeps SIMD alignment identical across runs so
// FFTW picks the same codelets and results are bit-reproducible.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t size);
  FftBuffer(FftBuffer&&) noexcept = default;
  FftBuffer& operator=(FftBuffer&&) noexcept = default;

  std::size_t size() const noexcept { return size_; }
  fftw_complex* raw() noexcept { return data_.get(); }
  std::complex<double>& operator[](std::size_t i) noexcept {
    return reinterpret_cast<std::complex<double>*>(data_.get())[i];
  }

 private:
  struct Deleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
  };
  std::size_t size_;
  std::unique_ptr<fftw_complex, Deleter> data_;
};

// In-place forward DFT: X_j = sum_k x_k exp(-2 pi i jk / N).
// Plans are created once per size under a lock; execution is thread-safe.
void forward_fft_inplace(FftBuffer& buffer);

// Smallest size >= n whose prime factors are in {2, 3, 5}.
std::size_t fft_friendly_size(std::size_t n);

}  // namespace fraclt::detail
