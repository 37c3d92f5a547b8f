#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mkdv/fft.hpp"
#include "mkdv/grid.hpp"
#include "mkdv/stepping.hpp"

namespace mkdv {

enum class OperatorKind { D1Plus, D1Minus, D1Central, D2Central, D3Central };

/// Periodic finite-difference operator stored as its circulant stencil:
/// (D u)_i = sum over taps (o, c) of c * u_{i+o}, indices taken mod N.
class DifferenceOperator {
public:
    struct Tap {
        int offset;
        double weight;
    };

    DifferenceOperator(OperatorKind kind, std::size_t n, double dx, std::vector<Tap> taps);

    OperatorKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    std::span<const Tap> taps() const noexcept { return taps_; }

    void apply(std::span<const double> u, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> u) const;

    /// Matrix entry (i, j) of the N x N circulant.
    double entry(std::size_t i, std::size_t j) const noexcept;

    /// Eigenvalue on the k-th discrete Fourier mode, sum_o c_o e^{2 pi i k o / N}.
    std::complex<double> symbol(std::size_t k) const noexcept;

private:
    OperatorKind kind_;
    std::size_t n_;
    double dx_;
    std::vector<Tap> taps_;
};

/// Second-order stencils; throws std::invalid_argument when N < 5.
DifferenceOperator build_operator(OperatorKind kind, const PeriodicGrid& grid);

/// M1: B = 2 D1c U^3.  M2: B = 3 U .* D1c U^2.
enum class Nonlinearity { M1, M2 };

struct FdSchemeConfig {
    Nonlinearity nonlinearity = Nonlinearity::M2;
    double dt = 0.01;
    double fp_tol = 1e-12;
    int fp_max_iter = 100;

    void validate() const;
};

/// Implicit-midpoint finite-difference stepper for u_t + S u + B(u) = 0 with
/// S = D3c. The shifted operator I + dt/2 S is circulant and inverted by its
/// Fourier symbol, computed once per instance.
class FdSolver {
public:
    FdSolver(const PeriodicGrid& grid, FdSchemeConfig config);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    const FdSchemeConfig& config() const noexcept { return config_; }

    /// B(U) for the configured nonlinearity.
    std::vector<double> nonlinear_term(std::span<const double> u) const;

    /// M(U) = -S U - B(U).
    std::vector<double> apply_M(std::span<const double> u) const;
    FieldState apply_M(const FieldState& u) const;

    /// (I + dt/2 S)^{-1} rhs.
    std::vector<double> solve_shifted(std::span<const double> rhs);

    /// One step in place: fixed point
    ///   U <- (I + dt/2 S)^{-1} [(I - dt/2 S) U_k - dt B((U_k + U)/2)]
    /// from U = U_k until the successive-iterate max-norm is <= fp_tol.
    /// On non-convergence the last iterate is kept and converged = false.
    StepInfo step(FieldState& state);

private:
    PeriodicGrid grid_;
    FdSchemeConfig config_;
    DifferenceOperator d1c_;
    DifferenceOperator d3c_;
    RealFft fft_;
    std::vector<std::complex<double>> inv_symbol_;  // 1 / (N (1 + dt/2 lambda_k))
    std::vector<std::complex<double>> spec_;
};

/// Runs an FdSolver through the shared time loop.
RunResult run_fd(const FdSchemeConfig& config, const PeriodicGrid& grid, FieldState initial,
                 double T, std::size_t sample_every, const SampleSink& sink = {},
                 bool keep_samples = true);

/// Rate of change of 𝓛₃ along the semi-discrete flow U' = M(U):
/// 2 dx <M(U), 2 U^3 + D2c U>. Zero in exact arithmetic for M1.
double semi_discrete_l3_derivative(std::span<const double> u, const PeriodicGrid& grid,
                                   Nonlinearity nonlinearity = Nonlinearity::M1);

/// sqrt((1 + mu dt/2) / (1 - 3 mu dt/2)); +inf outside 3 mu dt / 2 < 1.
double c_stability_bound(double mu, double dt) noexcept;

struct GrowthReport {
    std::vector<double> ratios;  ///< |dU^{k+1}| / |dU^k| per step
    std::vector<double> bounds;  ///< bound per step with mu over both trajectories
    double max_ratio = 0.0;
    double max_ratio_over_bound = 0.0;
    bool stability_warning = false;  ///< some step had 3 mu dt / 2 >= 1
};

/// Evolves U and a copy perturbed by uniform noise in [-size, size] for
/// `steps` steps. Throws NonConvergenceError if either trajectory fails.
GrowthReport empirical_growth_factor(const FdSchemeConfig& config, const PeriodicGrid& grid,
                                     const FieldState& u, double perturbation_size,
                                     std::size_t steps, std::uint64_t seed = 1);

} // namespace mkdv
