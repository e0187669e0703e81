#include "eitlab/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "eitlab/errors.hpp"

namespace eitlab {
namespace {

// Plan creation and destruction in FFTW are not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    if (n == 0) throw ValidationError("fft: length must be > 0");
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    if (in == nullptr || out == nullptr) {
      fftw_free(in);
      fftw_free(out);
      throw NumericalError("fft: allocation failed");
    }
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }

  void run(fftw_plan plan, const std::complex<double>* src, std::complex<double>* dst,
           double scale) {
    std::copy(src, src + n, reinterpret_cast<std::complex<double>*>(in));
    fftw_execute(plan);
    const auto* res = reinterpret_cast<const std::complex<double>*>(out);
    for (std::size_t i = 0; i < n; ++i) dst[i] = res[i] * scale;
  }
};

Fft::Fft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

std::size_t Fft::size() const { return impl_->n; }

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) {
  impl_->run(impl_->fwd, in, out, 1.0);
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) {
  impl_->run(impl_->bwd, in, out, 1.0 / static_cast<double>(impl_->n));
}

ComplexVector Fft::forward(const ComplexVector& x) {
  if (static_cast<std::size_t>(x.size()) != impl_->n) throw ValidationError("fft: length mismatch");
  ComplexVector y(x.size());
  forward(x.data(), y.data());
  return y;
}

ComplexVector Fft::inverse(const ComplexVector& x) {
  if (static_cast<std::size_t>(x.size()) != impl_->n) throw ValidationError("fft: length mismatch");
  ComplexVector y(x.size());
  inverse(x.data(), y.data());
  return y;
}

}  // namespace eitlab
