#pragma once
#include <fftw3.h>

#include <Eigen/Core>
#include <complex>
#include <mutex>

namespace slotlab {

inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// In-place 1D complex transforms on an owned buffer. Plans use FFTW_ESTIMATE
// on purpose: MEASURE picks algorithms by timing, which breaks bitwise
// reproducibility between runs.
class Fft1D {
 public:
  explicit Fft1D(int n) : n_(n), buf_(fftw_alloc_complex(n)) {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft1D() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  int size() const { return n_; }
  std::complex<double>* data() {
    return reinterpret_cast<std::complex<double>*>(buf_);
  }
  void load(const Eigen::VectorXcd& v) {
    Eigen::Map<Eigen::VectorXcd>(data(), n_) = v;
  }
  void store(Eigen::VectorXcd& v) const {
    v = Eigen::Map<const Eigen::VectorXcd>(
        reinterpret_cast<const std::complex<double>*>(buf_), n_);
  }
  void forward() { fftw_execute(fwd_); }                 // unnormalized
  void backward() { fftw_execute(bwd_); }                // unnormalized
  void backward_scaled() {
    fftw_execute(bwd_);
    Eigen::Map<Eigen::VectorXcd>(data(), n_) /= double(n_);
  }

 private:
  int n_;
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

}  // namespace slotlab
