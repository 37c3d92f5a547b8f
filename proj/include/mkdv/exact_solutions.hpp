#pragma once

#include <optional>
#include <string_view>

#include "mkdv/grid.hpp"

namespace mkdv {

enum class SolutionFamily { Soliton, Breather, DoublePole, ApproxBreather };

std::string_view to_string(SolutionFamily family) noexcept;
/// Accepts "soliton", "breather", "double_pole" / "double-pole", "approx_breather".
SolutionFamily parse_family(std::string_view name);

/// Closed-form solution selector. Shifts act as u(x - x_shift, t - t_shift).
struct ExactSolutionSpec {
    SolutionFamily family = SolutionFamily::Soliton;
    double alpha = 0.0;  ///< carrier frequency; ignored by soliton and double pole
    double beta = 1.0;   ///< amplitude / inverse width
    double x_shift = 0.0;
    double t_shift = 0.0;

    /// Throws std::invalid_argument when beta <= 0, or alpha <= 0 for the
    /// breather families.
    void validate() const;
};

/// beta * sech(beta * (x - beta^2 t)).
double eval_soliton(double beta, double x, double t);

/// Two-parameter breather
///   2b sech(Y) [cos P - (b/a) sin P tanh Y] / [1 + (b/a)^2 sin^2 P sech^2 Y]
/// with Y = b(x + g t), P = a(x + d t) - atan(b/a), g = 3a^2 - b^2, d = a^2 - 3b^2.
/// Throws std::invalid_argument for alpha <= 0.
double eval_breather(double alpha, double beta, double x, double t);

/// Large-alpha asymptotic form
///   -2 (b^2/a) sin[a(x - (3b^2 - a^2) t)] sech[b(x - (b^2 - 3a^2) t)].
double eval_approx_breather(double alpha, double beta, double x, double t);

/// Soliton-antisoliton (double pole) solution. Evaluated in an exponentially
/// rescaled form so that large |beta x - beta^3 t| does not overflow.
double eval_double_pole(double beta, double x, double t);

/// Asymptotic hump separation 2 ln(4 beta^3 t) / beta of the double pole.
/// Throws std::domain_error when 4 beta^3 t <= 1.
double theoretical_separation(double beta, double t);

/// u(x, t) for the spec, shifts applied.
double evaluate(const ExactSolutionSpec& spec, double x, double t);

/// Analytic du/dx where a closed form is implemented (soliton, double pole,
/// approximate breather); empty for the exact breather.
std::optional<double> evaluate_dx(const ExactSolutionSpec& spec, double x, double t);

/// Samples the solution at every grid node at time t.
FieldState sample(const ExactSolutionSpec& spec, const PeriodicGrid& grid, double t);

/// Centered-difference probe of u_t + u_xxx + 2 (u^3)_x on the closed form,
/// with stencil width h in both x and t. O(h^2) for an exact solution.
double mkdv_residual(const ExactSolutionSpec& spec, double x, double t, double h);

} // namespace mkdv
