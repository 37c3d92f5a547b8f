#include "mkdv/exact_solutions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mkdv {
namespace {

// sech without overflow for large |y|.
double sech(double y) {
    const double e = std::exp(-std::abs(y));
    return 2.0 * e / (1.0 + e * e);
}

void require_positive_beta(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

struct DoublePoleParts {
    double e;    // exp(-|a|)
    double sgn;  // sign(a)
    double c;    // 3 b^2 t - x
    double p;    // b x - 3 b^3 t
};

DoublePoleParts double_pole_parts(double beta, double x, double t) {
    const double a = beta * x - beta * beta * beta * t;
    return {std::exp(-std::abs(a)), a < 0.0 ? -1.0 : 1.0, 3.0 * beta * beta * t - x,
            beta * x - 3.0 * beta * beta * beta * t};
}

} // namespace

std::string_view to_string(SolutionFamily family) noexcept {
    switch (family) {
        case SolutionFamily::Soliton: return "soliton";
        case SolutionFamily::Breather: return "breather";
        case SolutionFamily::DoublePole: return "double_pole";
        case SolutionFamily::ApproxBreather: return "approx_breather";
    }
    return "unknown";
}

SolutionFamily parse_family(std::string_view name) {
    if (name == "soliton") return SolutionFamily::Soliton;
    if (name == "breather") return SolutionFamily::Breather;
    if (name == "double_pole" || name == "double-pole") return SolutionFamily::DoublePole;
    if (name == "approx_breather" || name == "approx-breather") {
        return SolutionFamily::ApproxBreather;
    }
    throw std::invalid_argument("unknown solution family '" + std::string(name) + "'");
}

void ExactSolutionSpec::validate() const {
    require_positive_beta(beta);
    if ((family == SolutionFamily::Breather || family == SolutionFamily::ApproxBreather) &&
        !(alpha > 0.0)) {
        throw std::invalid_argument(std::string(to_string(family)) +
                                    " requires alpha > 0 (use double_pole for alpha = 0)");
    }
    if (!std::isfinite(x_shift) || !std::isfinite(t_shift)) {
        throw std::invalid_argument("solution shifts must be finite");
    }
}

double eval_soliton(double beta, double x, double t) {
    return beta * sech(beta * (x - beta * beta * t));
}

double eval_breather(double alpha, double beta, double x, double t) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("breather requires alpha > 0; use the double pole for alpha = 0");
    }
    const double gamma = 3.0 * alpha * alpha - beta * beta;
    const double delta = alpha * alpha - 3.0 * beta * beta;
    const double y = beta * (x + gamma * t);
    const double phase = alpha * (x + delta * t) - std::atan(beta / alpha);
    const double s = sech(y);
    const double ratio = beta / alpha;
    const double sin_p = std::sin(phase);
    const double num = std::cos(phase) - ratio * sin_p * std::tanh(y);
    const double den = 1.0 + ratio * ratio * sin_p * sin_p * s * s;
    return 2.0 * beta * s * num / den;
}

double eval_approx_breather(double alpha, double beta, double x, double t) {
    const double carrier = alpha * (x - (3.0 * beta * beta - alpha * alpha) * t);
    const double envelope = beta * (x - (beta * beta - 3.0 * alpha * alpha) * t);
    return -2.0 * (beta * beta / alpha) * std::sin(carrier) * sech(envelope);
}

double eval_double_pole(double beta, double x, double t) {
    // Numerator and denominator divided by exp(|a|) and exp(2|a|).
    const auto [e, sgn, c, p] = double_pole_parts(beta, x, t);
    const double e2 = e * e;
    const double n = 0.5 * (1.0 + e2) + beta * c * sgn * 0.5 * (1.0 - e2);
    const double d = 2.0 * p * p * e2 + 0.5 * (1.0 + e2 * e2) + e2;
    return 4.0 * beta * e * n / d;
}

double theoretical_separation(double beta, double t) {
    require_positive_beta(beta);
    const double arg = 4.0 * beta * beta * beta * t;
    if (!(arg > 1.0)) {
        throw std::domain_error("logarithmic separation law needs 4 beta^3 t > 1");
    }
    return 2.0 * std::log(arg) / beta;
}

double evaluate(const ExactSolutionSpec& spec, double x, double t) {
    const double xs = x - spec.x_shift;
    const double ts = t - spec.t_shift;
    switch (spec.family) {
        case SolutionFamily::Soliton: return eval_soliton(spec.beta, xs, ts);
        case SolutionFamily::Breather: return eval_breather(spec.alpha, spec.beta, xs, ts);
        case SolutionFamily::DoublePole: return eval_double_pole(spec.beta, xs, ts);
        case SolutionFamily::ApproxBreather:
            return eval_approx_breather(spec.alpha, spec.beta, xs, ts);
    }
    return 0.0;
}

std::optional<double> evaluate_dx(const ExactSolutionSpec& spec, double x, double t) {
    const double xs = x - spec.x_shift;
    const double ts = t - spec.t_shift;
    const double b = spec.beta;
    switch (spec.family) {
        case SolutionFamily::Soliton: {
            const double y = b * (xs - b * b * ts);
            return -b * b * sech(y) * std::tanh(y);
        }
        case SolutionFamily::DoublePole: {
            const auto [e, sgn, c, p] = double_pole_parts(b, xs, ts);
            const double e2 = e * e;
            const double n = 0.5 * (1.0 + e2) + b * c * sgn * 0.5 * (1.0 - e2);
            const double n_x = b * b * c * 0.5 * (1.0 + e2);
            const double d = 2.0 * p * p * e2 + 0.5 * (1.0 + e2 * e2) + e2;
            const double d_x = 4.0 * b * p * e2 + b * sgn * (1.0 - e2 * e2);
            return 4.0 * b * e * (n_x * d - n * d_x) / (d * d);
        }
        case SolutionFamily::ApproxBreather: {
            const double a = spec.alpha;
            const double carrier = a * (xs - (3.0 * b * b - a * a) * ts);
            const double y = b * (xs - (b * b - 3.0 * a * a) * ts);
            const double s = sech(y);
            return -2.0 * (b * b / a) *
                   (a * std::cos(carrier) * s - b * std::sin(carrier) * s * std::tanh(y));
        }
        case SolutionFamily::Breather: return std::nullopt;
    }
    return std::nullopt;
}

FieldState sample(const ExactSolutionSpec& spec, const PeriodicGrid& grid, double t) {
    spec.validate();
    FieldState state{t, std::vector<double>(grid.size())};
    for (std::size_t n = 0; n < grid.size(); ++n) {
        state.values[n] = evaluate(spec, grid.node(n), t);
    }
    return state;
}

double mkdv_residual(const ExactSolutionSpec& spec, double x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("residual stencil width h must be positive");
    auto u = [&](double xx, double tt) { return evaluate(spec, xx, tt); };
    const double u_t = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    const double u_xxx =
        (u(x + 2.0 * h, t) - 2.0 * u(x + h, t) + 2.0 * u(x - h, t) - u(x - 2.0 * h, t)) /
        (2.0 * h * h * h);
    const double up = u(x + h, t);
    const double um = u(x - h, t);
    const double cube_x = (up * up * up - um * um * um) / (2.0 * h);
    return u_t + u_xxx + 2.0 * cube_x;
}

} // namespace mkdv
