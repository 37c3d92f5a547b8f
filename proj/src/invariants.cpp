#include "mkdv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mkdv {

InvariantTriple discrete_invariants(std::span<const double> values, const PeriodicGrid& grid) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("field size does not match grid node count");
    }
    const std::size_t n = values.size();
    const double dx = grid.dx();
    double s1 = 0.0, s2 = 0.0, s4 = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = values[i];
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s4 += u2 * u2;
        const double d = (values[i + 1 == n ? 0 : i + 1] - u) / dx;
        sd += d * d;
    }
    return {dx * s1, dx * s2, dx * (s4 - sd)};
}

InvariantTriple discrete_invariants(const FieldState& state, const PeriodicGrid& grid) {
    return discrete_invariants(std::span<const double>(state.values), grid);
}

ContinuumInvariants continuum_invariants(const ExactSolutionSpec& spec, double t,
                                         std::size_t quad_n, double half_length) {
    spec.validate();
    const PeriodicGrid grid(half_length, quad_n);
    const double h = grid.dx();
    ContinuumInvariants out;
    double s1 = 0.0, s2 = 0.0, se = 0.0;
    for (std::size_t n = 0; n < quad_n; ++n) {
        const double x = grid.node(n);
        const double u = evaluate(spec, x, t);
        double ux = 0.0;
        if (auto d = evaluate_dx(spec, x, t)) {
            ux = *d;
        } else {
            ux = (evaluate(spec, x - 2 * h, t) - 8 * evaluate(spec, x - h, t) +
                  8 * evaluate(spec, x + h, t) - evaluate(spec, x + 2 * h, t)) /
                 (12 * h);
        }
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        se += u2 * u2 - ux * ux;
    }
    out.value = {h * s1, h * s2, h * se};
    out.tail_magnitude = std::max(std::abs(evaluate(spec, -half_length, t)),
                                  std::abs(evaluate(spec, half_length, t)));
    out.tail_warning = out.tail_magnitude > 1e-8;
    return out;
}

DriftReport drift_report(std::span<const InvariantTriple> series, double l3_jump_threshold) {
    if (series.empty()) throw std::invalid_argument("drift_report needs a nonempty series");
    DriftReport r;
    const InvariantTriple& first = series.front();
    const double jump = l3_jump_threshold * std::abs(first.l3);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const InvariantTriple& s = series[k];
        r.max_abs_drift_l1 = std::max(r.max_abs_drift_l1, std::abs(s.l1 - first.l1));
        r.max_abs_drift_l2 = std::max(r.max_abs_drift_l2, std::abs(s.l2 - first.l2));
        r.max_abs_drift_l3 = std::max(r.max_abs_drift_l3, std::abs(s.l3 - first.l3));
        if (!r.l3_event && k > 0 && std::abs(s.l3 - series[k - 1].l3) > jump) {
            r.l3_event = k;
        }
    }
    return r;
}

} // namespace mkdv
