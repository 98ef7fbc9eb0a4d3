#include "fft.hpp"

#include <map>
#include <mutex>
#include <new>

namespace fraclt::detail {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(std::size_t n) {
  // Plans are never destroyed; there is one per distinct size.
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(plan_mutex());
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  FftBuffer scratch(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch.raw(), scratch.raw(),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  plans.emplace(n, p);
  return p;
}

}  // namespace

FftBuffer::FftBuffer(std::size_t size)
    : size_(size), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size))) {
  if (!data_) throw std::bad_alloc();
}

void forward_fft_inplace(FftBuffer& buffer) {
  fftw_execute_dft(plan_for(buffer.size()), buffer.raw(), buffer.raw());
}

std::size_t fft_friendly_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace fraclt::detail
