#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace gwhf::detail {

// fftw planning is not thread-safe; execution on distinct buffers is
std::mutex& fftw_planner_mutex();

class FftBuffer {
public:
  FftBuffer(int n, int sign);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
  int size() const { return n_; }
  void execute() { fftw_execute(plan_); }

private:
  int n_;
  fftw_complex* buf_;
  fftw_plan plan_;
};

/// Unnormalized in-place transform of `v`.
void fft(std::vector<std::complex<double>>& v, int sign);

}  // namespace gwhf::detail
