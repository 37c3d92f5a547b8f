#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mkdv/fft.hpp"
#include "mkdv/grid.hpp"
#include "mkdv/stepping.hpp"

namespace mkdv {

/// Fourier coefficients u_hat_j, j = -N/2..N/2-1, of a real periodic field:
///   u_hat_j = (1/N) sum_n u(x_n) exp(-i w_j x_n),  w_j = pi j / L,
/// so that u(x_n) = sum_j u_hat_j exp(i w_j x_n).
/// Stored in FFT order: j >= 0 at index j, j < 0 at index N + j.
class SpectralState {
public:
    SpectralState(std::shared_ptr<const PeriodicGrid> grid, double time,
                  std::vector<std::complex<double>> coeffs);

    const PeriodicGrid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const PeriodicGrid>& grid_ptr() const noexcept { return grid_; }
    double time() const noexcept { return time_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    std::span<const std::complex<double>> data() const noexcept { return coeffs_; }
    std::span<std::complex<double>> data() noexcept { return coeffs_; }

    /// Coefficient of wavenumber index j in [-N/2, N/2).
    std::complex<double> coeff(long j) const;

    /// w_j = pi j / L for the FFT-order storage index.
    double wavenumber(std::size_t storage_index) const noexcept;

private:
    std::shared_ptr<const PeriodicGrid> grid_;
    double time_;
    std::vector<std::complex<double>> coeffs_;
};

struct SpectralSchemeConfig {
    double dt = 1e-3;
    double fp_tol = 1e-12;
    int fp_max_iter = 100;
    bool dealias = false;  ///< 2/3-rule truncation of the cubic term

    void validate() const;
};

/// Pseudospectral implicit-midpoint solver for
///   d/dt u_hat = -[D^3 u_hat + 2 D v_hat],  D = diag(i w_j),  v = u^3,
/// with the preconditioned fixed point
///   U <- (I + dt/2 D^3)^{-1} [(I - dt/2 D^3) U_k - 2 dt D V(mid)].
/// The Nyquist mode is dropped from odd-order derivatives.
class SpectralSolver {
public:
    /// Throws std::invalid_argument unless N is a power of two.
    SpectralSolver(std::shared_ptr<const PeriodicGrid> grid, SpectralSchemeConfig config = {});

    const PeriodicGrid& grid() const noexcept { return *grid_; }
    const SpectralSchemeConfig& config() const noexcept { return config_; }

    SpectralState forward(const FieldState& u);
    FieldState inverse(const SpectralState& s);

    /// Coefficient j multiplied by (i w_j)^order; Nyquist zeroed for odd order.
    SpectralState derivative(const SpectralState& s, int order) const;

    /// i w^3 u_hat - 2 i w v_hat with v = u^3 formed pointwise.
    SpectralState rhs(const SpectralState& s);

    struct StepResult {
        SpectralState state;
        FieldState field;  ///< physical samples of `state`
        StepInfo info;
    };

    StepResult step(const SpectralState& s);

private:
    void to_half(std::span<const double> u, std::vector<std::complex<double>>& half);
    void from_half(const std::vector<std::complex<double>>& half, std::span<double> u);
    SpectralState expand(const std::vector<std::complex<double>>& half, double time) const;
    void contract(const SpectralState& s, std::vector<std::complex<double>>& half) const;
    std::complex<double> d1(std::size_t k) const noexcept;  // half-spectrum index

    std::shared_ptr<const PeriodicGrid> grid_;
    SpectralSchemeConfig config_;
    RealFft fft_;
    std::vector<std::complex<double>> half_a_, half_b_;
};

bool is_power_of_two(std::size_t n) noexcept;

RunResult run_spectral(const SpectralSchemeConfig& config,
                       std::shared_ptr<const PeriodicGrid> grid, FieldState initial, double T,
                       std::size_t sample_every, const SampleSink& sink = {},
                       bool keep_samples = true);

} // namespace mkdv
