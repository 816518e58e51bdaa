#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace wickstat::detail {

// Per-thread FFTW workspaces. Plans are built once per (d, M) and thread with
// FFTW_ESTIMATE, so the same size always runs the same code path.

class RealFft {
public:
  RealFft(int d, int M);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int dim() const { return d_; }
  int size() const { return M_; }
  std::size_t real_count() const { return nreal_; }
  std::size_t half_count() const { return nhalf_; }
  int half_last() const { return M_ / 2 + 1; }

  double* real() { return real_; }
  std::complex<double>* spec() { return reinterpret_cast<std::complex<double>*>(spec_); }

  void forward();   // real -> spec, unnormalized
  void backward();  // spec -> real, unnormalized; clobbers spec

private:
  int d_, M_;
  std::size_t nreal_, nhalf_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_, bwd_;
};

class ComplexFft {
public:
  ComplexFft(int d, int M);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  int dim() const { return d_; }
  int size() const { return M_; }
  std::size_t count() const { return n_; }
  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }

  void forward();   // sign -1
  void backward();  // sign +1, unnormalized

private:
  int d_, M_;
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

RealFft& real_fft(int d, int M);
ComplexFft& complex_fft(int d, int M);

}  // namespace wickstat::detail
