#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace wickstat::detail {

namespace {

// The FFTW planner is not thread safe.
std::mutex planner_mutex;

void dims(int d, int M, int out[3]) {
  for (int a = 0; a < d; ++a) out[a] = M;
}

}  // namespace

RealFft::RealFft(int d, int M) : d_(d), M_(M) {
  if (d < 1 || d > 3 || M < 1) throw std::invalid_argument("bad transform shape");
  nreal_ = 1;
  for (int a = 0; a < d; ++a) nreal_ *= static_cast<std::size_t>(M);
  nhalf_ = nreal_ / static_cast<std::size_t>(M) * static_cast<std::size_t>(M / 2 + 1);
  int n[3];
  dims(d, M, n);
  std::lock_guard<std::mutex> lock(planner_mutex);
  real_ = fftw_alloc_real(nreal_);
  spec_ = fftw_alloc_complex(nhalf_);
  fwd_ = fftw_plan_dft_r2c(d, n, real_, spec_, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r(d, n, spec_, real_, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw planning failed");
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::forward() { fftw_execute(fwd_); }
void RealFft::backward() { fftw_execute(bwd_); }

ComplexFft::ComplexFft(int d, int M) : d_(d), M_(M) {
  if (d < 1 || d > 3 || M < 1) throw std::invalid_argument("bad transform shape");
  n_ = 1;
  for (int a = 0; a < d; ++a) n_ *= static_cast<std::size_t>(M);
  int n[3];
  dims(d, M, n);
  std::lock_guard<std::mutex> lock(planner_mutex);
  buf_ = fftw_alloc_complex(n_);
  fwd_ = fftw_plan_dft(d, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft(d, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw planning failed");
}

ComplexFft::~ComplexFft() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(buf_);
}

void ComplexFft::forward() { fftw_execute(fwd_); }
void ComplexFft::backward() { fftw_execute(bwd_); }

RealFft& real_fft(int d, int M) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[{d, M}];
  if (!slot) slot = std::make_unique<RealFft>(d, M);
  return *slot;
}

ComplexFft& complex_fft(int d, int M) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<ComplexFft>> cache;
  auto& slot = cache[{d, M}];
  if (!slot) slot = std::make_unique<ComplexFft>(d, M);
  return *slot;
}

}  // namespace wickstat::detail
