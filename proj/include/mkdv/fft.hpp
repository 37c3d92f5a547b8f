#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mkdv {

/// Unnormalized real-to-complex / complex-to-real FFT of fixed length N
/// backed by FFTW. forward gives X_k = sum_n x_n e^{-2 pi i k n / N} for
/// k = 0..N/2; inverse is the unscaled adjoint, so inverse(forward(x)) = N x.
///
/// Plans are built with FFTW_ESTIMATE for run-to-run reproducibility. An
/// instance owns its buffers and is not reentrant; use one per thread.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    std::size_t n_;
    double* real_;
    void* spec_;  // fftw_complex*
    void* plan_forward_;
    void* plan_inverse_;
};

} // namespace mkdv
