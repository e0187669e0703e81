#pragma once

#include <complex>
#include <cstddef>
#include <memory>

#include "eitlab/fields.hpp"

namespace eitlab {

/// Complex 1-D DFT of fixed length (FFTW backed).
///
/// forward: X_k = sum_j x_j exp(-2 pi i jk/n); inverse includes the 1/n
/// factor, so inverse(forward(x)) == x. Instances are not shareable across
/// threads; create one per thread.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const;
  void forward(const std::complex<double>* in, std::complex<double>* out);
  void inverse(const std::complex<double>* in, std::complex<double>* out);
  ComplexVector forward(const ComplexVector& x);
  ComplexVector inverse(const ComplexVector& x);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eitlab
