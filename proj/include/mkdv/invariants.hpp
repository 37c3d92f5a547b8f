#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mkdv/exact_solutions.hpp"
#include "mkdv/grid.hpp"

namespace mkdv {

/// Mean, squared norm and energy functionals.
struct InvariantTriple {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
};

/// Grid invariants:
///   l1 = dx sum U,  l2 = dx sum U^2,
///   l3 = dx sum U^4 - dx sum ((U[n+1] - U[n]) / dx)^2  (periodic wrap).
InvariantTriple discrete_invariants(std::span<const double> values, const PeriodicGrid& grid);
InvariantTriple discrete_invariants(const FieldState& state, const PeriodicGrid& grid);

struct ContinuumInvariants {
    InvariantTriple value;
    double tail_magnitude = 0.0;  ///< max |u| at the two domain ends
    bool tail_warning = false;    ///< tail_magnitude > 1e-8: domain too small
};

/// Trapezoidal quadrature of I(u), |u|_2^2 and E(u) = int (u^4 - u_x^2) over
/// [-L, L) with quad_n points. u_x is analytic when evaluate_dx provides it,
/// otherwise a fourth-order centered difference at spacing 2L/quad_n.
ContinuumInvariants continuum_invariants(const ExactSolutionSpec& spec, double t,
                                         std::size_t quad_n, double half_length);

struct DriftReport {
    double max_abs_drift_l1 = 0.0;
    double max_abs_drift_l2 = 0.0;
    double max_abs_drift_l3 = 0.0;
    /// First index k with |l3[k] - l3[k-1]| > threshold * |l3[0]|.
    std::optional<std::size_t> l3_event;
};

inline constexpr double kDefaultL3JumpThreshold = 0.005;

/// Per-invariant max deviation from the first entry plus the first 𝓛₃ jump.
/// Throws std::invalid_argument on an empty series.
DriftReport drift_report(std::span<const InvariantTriple> series,
                         double l3_jump_threshold = kDefaultL3JumpThreshold);

} // namespace mkdv
