#include "mkdv/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>

namespace mkdv {
namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("FFT length must be at least 2");
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spec_ = fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1));
    if (real_ == nullptr || spec_ == nullptr) {
        fftw_free(real_);
        fftw_free(spec_);
        throw std::bad_alloc();
    }
    auto* spec = static_cast<fftw_complex*>(spec_);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    plan_forward_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
        fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
    }
    fftw_free(real_);
    fftw_free(spec_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != spectrum_size()) {
        throw std::invalid_argument("RealFft::forward size mismatch");
    }
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(static_cast<fftw_plan>(plan_forward_));
    const auto* spec = static_cast<const fftw_complex*>(spec_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (in.size() != spectrum_size() || out.size() != n_) {
        throw std::invalid_argument("RealFft::inverse size mismatch");
    }
    auto* spec = static_cast<fftw_complex*>(spec_);
    for (std::size_t k = 0; k < in.size(); ++k) {
        spec[k][0] = in[k].real();
        spec[k][1] = in[k].imag();
    }
    // c2r destroys its input; spec_ is scratch so that is fine.
    fftw_execute(static_cast<fftw_plan>(plan_inverse_));
    std::copy(real_, real_ + n_, out.begin());
}

} // namespace mkdv
