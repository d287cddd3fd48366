#ifndef SEMIREL_FFT_HPP
#define SEMIREL_FFT_HPP

#include "error.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <span>
#include <vector>

namespace semirel {

using complex = std::complex<double>;

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// In-place complex FFT over a row-major 1D/2D array. Plans use
// FFTW_ESTIMATE so the chosen algorithm (and hence every rounding) is the
// same on every run. Unnormalized: backward(forward(x)) = size() * x.
class FftPlan {
 public:
  FftPlan(std::span<const int> shape, complex* buffer) {
    int total = 1;
    for (int s : shape) total *= s;
    size_ = total;
    std::lock_guard lock(detail::fftw_planner_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(buffer);
    const int rank = static_cast<int>(shape.size());
    forward_ = fftw_plan_dft(rank, shape.data(), data, data, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft(rank, shape.data(), data, data, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_ || !backward_) throw Error("FFTW plan creation failed");
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  ~FftPlan() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
  }

  // `data` may be any array of size() elements (plans are unaligned).
  void forward(complex* data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(forward_, d, d);
  }
  void backward(complex* data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(backward_, d, d);
  }

  int size() const { return size_; }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  int size_ = 0;
};

}  // namespace semirel

#endif  // SEMIREL_FFT_HPP
