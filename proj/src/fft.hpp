#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <new>

namespace qtalbot::detail {

// FFTW's planner is not re-entrant; every plan create/destroy goes through this lock.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place 2D transform on an owned buffer, unnormalized. The buffer comes
// from fftw_malloc so the planner always sees the same alignment and picks
// the same codelets run to run.
class Fft2d {
 public:
  Fft2d(std::size_t nx, std::size_t ny)
      : nx_(nx), ny_(ny), raw_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nx * ny))) {
    if (!raw_) throw std::bad_alloc();
    std::lock_guard lock(fftw_planner_mutex());
    auto* p = raw_;
    forward_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), p, p, FFTW_FORWARD,
                                FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), p, p, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  }
  ~Fft2d() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(raw_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(raw_); }
  std::size_t size() const { return nx_ * ny_; }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t nx_;
  std::size_t ny_;
  fftw_complex* raw_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace qtalbot::detail
