// Thin in-place complex FFT over FFTW.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace splitting::detail {

class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  // Unnormalized; backward(forward(x)) == n * x. Safe to call concurrently.
  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace splitting::detail
