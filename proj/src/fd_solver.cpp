#include "mkdv/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace mkdv {

DifferenceOperator::DifferenceOperator(OperatorKind kind, std::size_t n, double dx,
                                       std::vector<Tap> taps)
    : kind_(kind), n_(n), dx_(dx), taps_(std::move(taps)) {}

void DifferenceOperator::apply(std::span<const double> u, std::span<double> out) const {
    if (u.size() != n_ || out.size() != n_) {
        throw std::invalid_argument("difference operator size mismatch");
    }
    const auto n = static_cast<std::ptrdiff_t>(n_);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const Tap& t : taps_) acc += t.weight * u[wrap_index(i + t.offset, n_)];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

std::vector<double> DifferenceOperator::apply(std::span<const double> u) const {
    std::vector<double> out(n_);
    apply(u, out);
    return out;
}

double DifferenceOperator::entry(std::size_t i, std::size_t j) const noexcept {
    double v = 0.0;
    for (const Tap& t : taps_) {
        if (wrap_index(static_cast<std::ptrdiff_t>(i) + t.offset, n_) == j) v += t.weight;
    }
    return v;
}

std::complex<double> DifferenceOperator::symbol(std::size_t k) const noexcept {
    std::complex<double> s = 0.0;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
    for (const Tap& t : taps_) s += t.weight * std::polar(1.0, theta * t.offset);
    return s;
}

DifferenceOperator build_operator(OperatorKind kind, const PeriodicGrid& grid) {
    const std::size_t n = grid.size();
    if (n < 5) {
        throw std::invalid_argument("difference operators need N >= 5, got " + std::to_string(n));
    }
    const double h = grid.dx();
    std::vector<DifferenceOperator::Tap> taps;
    switch (kind) {
        case OperatorKind::D1Plus: taps = {{0, -1.0 / h}, {1, 1.0 / h}}; break;
        case OperatorKind::D1Minus: taps = {{-1, -1.0 / h}, {0, 1.0 / h}}; break;
        case OperatorKind::D1Central: taps = {{-1, -0.5 / h}, {1, 0.5 / h}}; break;
        case OperatorKind::D2Central: {
            const double w = 1.0 / (h * h);
            taps = {{-1, w}, {0, -2.0 * w}, {1, w}};
            break;
        }
        case OperatorKind::D3Central: {
            const double w = 0.5 / (h * h * h);
            taps = {{-2, -w}, {-1, 2.0 * w}, {1, -2.0 * w}, {2, w}};
            break;
        }
    }
    return DifferenceOperator(kind, n, h, std::move(taps));
}

void FdSchemeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(fp_tol > 0.0)) throw std::invalid_argument("fp_tol must be positive");
    if (fp_max_iter < 1) throw std::invalid_argument("fp_max_iter must be at least 1");
}

namespace {

std::vector<double> cube(std::span<const double> u) {
    std::vector<double> c(u.size());
    std::transform(u.begin(), u.end(), c.begin(), [](double v) { return v * v * v; });
    return c;
}

std::vector<double> nonlinear(std::span<const double> u, const DifferenceOperator& d1c,
                              Nonlinearity kind) {
    const std::size_t n = u.size();
    std::vector<double> out(n);
    if (kind == Nonlinearity::M1) {
        d1c.apply(cube(u), out);
        for (double& v : out) v *= 2.0;
    } else {
        std::vector<double> sq(n);
        std::transform(u.begin(), u.end(), sq.begin(), [](double v) { return v * v; });
        d1c.apply(sq, out);
        for (std::size_t i = 0; i < n; ++i) out[i] *= 3.0 * u[i];
    }
    return out;
}

std::vector<double> apply_m(std::span<const double> u, const DifferenceOperator& d1c,
                            const DifferenceOperator& d3c, Nonlinearity kind) {
    std::vector<double> m = nonlinear(u, d1c, kind);
    const std::vector<double> s = d3c.apply(u);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = -s[i] - m[i];
    return m;
}

double max_square(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, v * v);
    return m;
}

} // namespace

FdSolver::FdSolver(const PeriodicGrid& grid, FdSchemeConfig config)
    : grid_(grid),
      config_(config),
      d1c_(build_operator(OperatorKind::D1Central, grid)),
      d3c_(build_operator(OperatorKind::D3Central, grid)),
      fft_(grid.size()),
      inv_symbol_(fft_.spectrum_size()),
      spec_(fft_.spectrum_size()) {
    config_.validate();
    const double n = static_cast<double>(grid.size());
    for (std::size_t k = 0; k < inv_symbol_.size(); ++k) {
        inv_symbol_[k] = 1.0 / (n * (1.0 + 0.5 * config_.dt * d3c_.symbol(k)));
    }
}

std::vector<double> FdSolver::nonlinear_term(std::span<const double> u) const {
    return nonlinear(u, d1c_, config_.nonlinearity);
}

std::vector<double> FdSolver::apply_M(std::span<const double> u) const {
    return apply_m(u, d1c_, d3c_, config_.nonlinearity);
}

FieldState FdSolver::apply_M(const FieldState& u) const {
    return {u.time, apply_M(std::span<const double>(u.values))};
}

std::vector<double> FdSolver::solve_shifted(std::span<const double> rhs) {
    std::vector<double> out(grid_.size());
    fft_.forward(rhs, spec_);
    for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] *= inv_symbol_[k];
    fft_.inverse(spec_, out);
    return out;
}

StepInfo FdSolver::step(FieldState& state) {
    std::vector<double>& u = state.values;
    const std::size_t n = u.size();
    if (n != grid_.size()) throw std::invalid_argument("state size does not match solver grid");
    const double dt = config_.dt;

    // Explicit half: (I - dt/2 S) U_k, then mapped through the shifted inverse once.
    std::vector<double> rhs = d3c_.apply(u);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i] - 0.5 * dt * rhs[i];
    const std::vector<double> linear_part = solve_shifted(rhs);

    StepInfo info;
    info.converged = false;
    std::vector<double> iterate = u;
    std::vector<double> mid(n);
    for (int it = 1; it <= config_.fp_max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (u[i] + iterate[i]);
        std::vector<double> b = nonlinear_term(mid);
        for (double& v : b) v *= dt;
        const std::vector<double> correction = solve_shifted(b);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = linear_part[i] - correction[i];
            diff = std::max(diff, std::abs(next - iterate[i]));
            iterate[i] = next;
        }
        info.fp_iters = it;
        if (!std::isfinite(diff)) break;
        if (diff <= config_.fp_tol) {
            info.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (u[i] + iterate[i]);
    info.mu = max_square(mid);
    info.stability_warning = 1.5 * info.mu * dt >= 1.0;
    u = std::move(iterate);
    state.time += dt;
    return info;
}

RunResult run_fd(const FdSchemeConfig& config, const PeriodicGrid& grid, FieldState initial,
                 double T, std::size_t sample_every, const SampleSink& sink, bool keep_samples) {
    FdSolver solver(grid, config);
    return drive(std::move(initial), T, config.dt, sample_every,
                 [&](FieldState& s) { return solver.step(s); }, sink, keep_samples);
}

double semi_discrete_l3_derivative(std::span<const double> u, const PeriodicGrid& grid,
                                   Nonlinearity nonlinearity) {
    const DifferenceOperator d1c = build_operator(OperatorKind::D1Central, grid);
    const DifferenceOperator d2c = build_operator(OperatorKind::D2Central, grid);
    const DifferenceOperator d3c = build_operator(OperatorKind::D3Central, grid);
    const std::vector<double> m = apply_m(u, d1c, d3c, nonlinearity);
    const std::vector<double> w = d2c.apply(u);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += m[i] * (2.0 * u[i] * u[i] * u[i] + w[i]);
    }
    return 2.0 * grid.dx() * acc;
}

double c_stability_bound(double mu, double dt) noexcept {
    const double den = 1.0 - 1.5 * mu * dt;
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt((1.0 + 0.5 * mu * dt) / den);
}

GrowthReport empirical_growth_factor(const FdSchemeConfig& config, const PeriodicGrid& grid,
                                     const FieldState& u, double perturbation_size,
                                     std::size_t steps, std::uint64_t seed) {
    FdSolver a(grid, config);
    FdSolver b(grid, config);
    FieldState x = u;
    FieldState y = u;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (double& v : y.values) v += perturbation_size * noise(rng);

    auto distance = [](const FieldState& p, const FieldState& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            const double d = p.values[i] - q.values[i];
            s += d * d;
        }
        return std::sqrt(s);
    };

    GrowthReport report;
    double prev = distance(x, y);
    for (std::size_t k = 0; k < steps; ++k) {
        const double mu_before = std::max(max_square(x.values), max_square(y.values));
        const StepInfo ix = a.step(x);
        if (!ix.converged) throw NonConvergenceError(x.time, ix.fp_iters);
        const StepInfo iy = b.step(y);
        if (!iy.converged) throw NonConvergenceError(y.time, iy.fp_iters);
        const double mu = std::max({mu_before, max_square(x.values), max_square(y.values)});
        const double bound = c_stability_bound(mu, config.dt);
        if (1.5 * mu * config.dt >= 1.0) report.stability_warning = true;
        const double cur = distance(x, y);
        const double ratio = prev == 0.0 ? (cur == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                         : cur / prev;
        report.ratios.push_back(ratio);
        report.bounds.push_back(bound);
        report.max_ratio = std::max(report.max_ratio, ratio);
        report.max_ratio_over_bound = std::max(report.max_ratio_over_bound, ratio / bound);
        prev = cur;
    }
    return report;
}

} // namespace mkdv
