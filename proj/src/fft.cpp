#include "fft.hpp"

#include <algorithm>

namespace gwhf::detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

FftBuffer::FftBuffer(int n, int sign) : n_(n) {
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  buf_ = fftw_alloc_complex(static_cast<std::size_t>(n));
  plan_ = fftw_plan_dft_1d(n, buf_, buf_, sign, FFTW_ESTIMATE);
}

FftBuffer::~FftBuffer() {
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan_);
  fftw_free(buf_);
}

void fft(std::vector<std::complex<double>>& v, int sign) {
  FftBuffer b(static_cast<int>(v.size()), sign);
  std::copy(v.begin(), v.end(), b.data());
  b.execute();
  std::copy(b.data(), b.data() + v.size(), v.begin());
}

}  // namespace gwhf::detail
