#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

namespace swhomog {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Real-to-complex FFT pair for a fixed transform size, FFTW_ESTIMATE plans
/// (deterministic across runs). Not thread-safe per instance; plan creation is
/// serialized globally.
class RealFFT {
 public:
  explicit RealFFT(std::size_t n) : n_(n), real_(n), spec_(n / 2 + 1) {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_.data(),
                                reinterpret_cast<fftw_complex*>(spec_.data()), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(spec_.data()),
                                real_.data(), FFTW_ESTIMATE);
  }
  ~RealFFT() {
    if (!fwd_ && !inv_) return;
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
  }
  RealFFT(const RealFFT&) = delete;
  RealFFT& operator=(const RealFFT&) = delete;
  // Plans point into the vectors' heap storage, which a move preserves.
  RealFFT(RealFFT&& o) noexcept
      : n_(o.n_), real_(std::move(o.real_)), spec_(std::move(o.spec_)), fwd_(o.fwd_),
        inv_(o.inv_) {
    o.fwd_ = nullptr;
    o.inv_ = nullptr;
  }
  RealFFT& operator=(RealFFT&&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  /// in (length n) -> out (length n/2+1), unnormalized FFTW convention.
  void forward(const double* in, std::complex<double>* out) {
    for (std::size_t i = 0; i < n_; ++i) real_[i] = in[i];
    fftw_execute(fwd_);
    for (std::size_t i = 0; i < spec_.size(); ++i) out[i] = spec_[i];
  }

  /// in (length n/2+1) -> out (length n), normalized by 1/n so that
  /// inverse(forward(x)) == x.
  void inverse(const std::complex<double>* in, double* out) {
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] = in[i];
    fftw_execute(inv_);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = real_[i] * s;
  }

 private:
  std::size_t n_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

}  // namespace swhomog
