#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace splitting::detail {

namespace {

// Only plan creation and destruction touch FFTW's shared state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct Fft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft::Fft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  std::lock_guard lock(planner_mutex());
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buf == nullptr) throw std::bad_alloc();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int len = static_cast<int>(n);
  plans_->fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (plans_->fwd == nullptr || plans_->bwd == nullptr) throw std::runtime_error("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  if (plans_->fwd != nullptr) fftw_destroy_plan(plans_->fwd);
  if (plans_->bwd != nullptr) fftw_destroy_plan(plans_->bwd);
}

void Fft::forward(std::complex<double>* data) const { fftw_execute_dft(plans_->fwd, as_fftw(data), as_fftw(data)); }

void Fft::backward(std::complex<double>* data) const { fftw_execute_dft(plans_->bwd, as_fftw(data), as_fftw(data)); }

}  // namespace splitting::detail
