#include "mkdv/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mkdv {

SpectralState::SpectralState(std::shared_ptr<const PeriodicGrid> grid, double time,
                             std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), time_(time), coeffs_(std::move(coeffs)) {
    if (!grid_) throw std::invalid_argument("spectral state needs a grid");
    if (coeffs_.size() != grid_->size()) {
        throw std::invalid_argument("coefficient count does not match grid node count");
    }
}

std::complex<double> SpectralState::coeff(long j) const {
    const long n = static_cast<long>(coeffs_.size());
    if (j < -n / 2 || j >= n / 2) throw std::out_of_range("wavenumber index out of range");
    return coeffs_[static_cast<std::size_t>(j < 0 ? j + n : j)];
}

double SpectralState::wavenumber(std::size_t storage_index) const noexcept {
    const long n = static_cast<long>(coeffs_.size());
    const long idx = static_cast<long>(storage_index);
    const long j = idx < n / 2 ? idx : idx - n;
    return std::numbers::pi * static_cast<double>(j) / grid_->half_length();
}

void SpectralSchemeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(fp_tol > 0.0)) throw std::invalid_argument("fp_tol must be positive");
    if (fp_max_iter < 1) throw std::invalid_argument("fp_max_iter must be at least 1");
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace {

std::size_t checked_size(const std::shared_ptr<const PeriodicGrid>& grid) {
    if (!grid) throw std::invalid_argument("spectral solver needs a grid");
    if (!is_power_of_two(grid->size())) {
        throw std::invalid_argument("spectral solver needs N to be a power of two, got " +
                                    std::to_string(grid->size()));
    }
    return grid->size();
}

} // namespace

SpectralSolver::SpectralSolver(std::shared_ptr<const PeriodicGrid> grid,
                               SpectralSchemeConfig config)
    : grid_(std::move(grid)),
      config_(config),
      fft_(checked_size(grid_)),
      half_a_(fft_.spectrum_size()),
      half_b_(fft_.spectrum_size()) {
    config_.validate();
}

void SpectralSolver::to_half(std::span<const double> u, std::vector<std::complex<double>>& half) {
    half.resize(fft_.spectrum_size());
    fft_.forward(u, half);
    // x_0 = -L contributes the phase exp(i w_k L) = (-1)^k.
    const double scale = 1.0 / static_cast<double>(fft_.size());
    for (std::size_t k = 0; k < half.size(); ++k) half[k] *= (k % 2 == 0) ? scale : -scale;
}

void SpectralSolver::from_half(const std::vector<std::complex<double>>& half, std::span<double> u) {
    half_b_.resize(half.size());
    for (std::size_t k = 0; k < half.size(); ++k) half_b_[k] = (k % 2 == 0) ? half[k] : -half[k];
    fft_.inverse(half_b_, u);
}

SpectralState SpectralSolver::expand(const std::vector<std::complex<double>>& half,
                                     double time) const {
    const std::size_t n = fft_.size();
    std::vector<std::complex<double>> full(n);
    for (std::size_t k = 0; k <= n / 2; ++k) full[k] = half[k];
    for (std::size_t k = 1; k < n / 2; ++k) full[n - k] = std::conj(half[k]);
    return SpectralState(grid_, time, std::move(full));
}

void SpectralSolver::contract(const SpectralState& s,
                              std::vector<std::complex<double>>& half) const {
    if (s.size() != fft_.size()) throw std::invalid_argument("spectral state size mismatch");
    half.assign(s.data().begin(), s.data().begin() + static_cast<long>(fft_.spectrum_size()));
}

std::complex<double> SpectralSolver::d1(std::size_t k) const noexcept {
    if (k >= fft_.size() / 2) return 0.0;
    return {0.0, std::numbers::pi * static_cast<double>(k) / grid_->half_length()};
}

SpectralState SpectralSolver::forward(const FieldState& u) {
    if (u.values.size() != fft_.size()) throw std::invalid_argument("field size mismatch");
    std::vector<std::complex<double>> half;
    to_half(u.values, half);
    return expand(half, u.time);
}

FieldState SpectralSolver::inverse(const SpectralState& s) {
    std::vector<std::complex<double>> half;
    contract(s, half);
    FieldState out{s.time(), std::vector<double>(fft_.size())};
    from_half(half, out.values);
    return out;
}

SpectralState SpectralSolver::derivative(const SpectralState& s, int order) const {
    if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
    const std::size_t n = s.size();
    std::vector<std::complex<double>> out(s.data().begin(), s.data().end());
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (idx == n / 2 && order % 2 == 1) {
            out[idx] = 0.0;
            continue;
        }
        out[idx] *= std::pow(std::complex<double>(0.0, s.wavenumber(idx)), order);
    }
    return SpectralState(s.grid_ptr(), s.time(), std::move(out));
}

SpectralState SpectralSolver::rhs(const SpectralState& s) {
    std::vector<std::complex<double>> u_half;
    contract(s, u_half);
    std::vector<double> u(fft_.size());
    from_half(u_half, u);
    for (double& v : u) v = v * v * v;
    std::vector<std::complex<double>> v_half;
    to_half(u, v_half);
    const std::size_t cut = fft_.size() / 3;
    for (std::size_t k = 0; k < u_half.size(); ++k) {
        if (config_.dealias && k > cut) v_half[k] = 0.0;
        const std::complex<double> d = d1(k);
        u_half[k] = -(d * d * d * u_half[k] + 2.0 * d * v_half[k]);
    }
    return expand(u_half, s.time());
}

SpectralSolver::StepResult SpectralSolver::step(const SpectralState& s) {
    const std::size_t n = fft_.size();
    const std::size_t m = fft_.spectrum_size();
    const double dt = config_.dt;
    const std::size_t cut = n / 3;

    std::vector<std::complex<double>> h0;
    contract(s, h0);
    std::vector<double> u0(n);
    from_half(h0, u0);

    // Diagonal parts of the preconditioned update.
    std::vector<std::complex<double>> explicit_part(m), nl_factor(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::complex<double> d = d1(k);
        const std::complex<double> d3 = d * d * d;
        const std::complex<double> inv = 1.0 / (1.0 + 0.5 * dt * d3);
        explicit_part[k] = (1.0 - 0.5 * dt * d3) * h0[k] * inv;
        nl_factor[k] = 2.0 * dt * d * inv;
    }

    std::vector<std::complex<double>> cand = h0;
    std::vector<double> u_cand = u0;
    std::vector<double> mid(n);
    StepInfo info;
    info.converged = false;
    for (int it = 1; it <= config_.fp_max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 0.5 * (u0[i] + u_cand[i]);
            mid[i] = w * w * w;
        }
        to_half(mid, half_a_);
        double diff = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::complex<double> v = (config_.dealias && k > cut) ? 0.0 : half_a_[k];
            const std::complex<double> next = explicit_part[k] - nl_factor[k] * v;
            diff = std::max(diff, std::abs(next - cand[k]));
            cand[k] = next;
        }
        from_half(cand, u_cand);
        info.fp_iters = it;
        if (!std::isfinite(diff)) break;
        if (diff <= config_.fp_tol) {
            info.converged = true;
            break;
        }
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 * (u0[i] + u_cand[i]);
        mu = std::max(mu, w * w);
    }
    info.mu = mu;
    const double t_next = s.time() + dt;
    return {expand(cand, t_next), FieldState{t_next, std::move(u_cand)}, info};
}

RunResult run_spectral(const SpectralSchemeConfig& config,
                       std::shared_ptr<const PeriodicGrid> grid, FieldState initial, double T,
                       std::size_t sample_every, const SampleSink& sink, bool keep_samples) {
    SpectralSolver solver(std::move(grid), config);
    SpectralState current = solver.forward(initial);
    return drive(
        std::move(initial), T, config.dt, sample_every,
        [&](FieldState& field) {
            auto r = solver.step(current);
            current = std::move(r.state);
            field.values = std::move(r.field.values);
            return r.info;
        },
        sink, keep_samples);
}

} // namespace mkdv
