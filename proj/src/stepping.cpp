#include "mkdv/stepping.hpp"

#include <algorithm>
#include <cmath>

namespace mkdv {

std::size_t step_count(double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("final time T must be nonnegative");
    return static_cast<std::size_t>(std::floor(T / dt + 1e-9));
}

RunResult drive(FieldState initial, double T, double dt, std::size_t sample_every,
                const StepFunction& step, const SampleSink& sink, bool keep_samples) {
    if (sample_every == 0) throw std::invalid_argument("sample stride must be positive");
    const std::size_t steps = step_count(T, dt);
    const double t0 = initial.time;

    RunResult result;
    RunSample pending{std::move(initial), 0, 0};
    auto emit = [&](RunSample& s) {
        bool go_on = true;
        if (sink) go_on = sink(s);
        if (keep_samples) result.samples.push_back(s);
        s.fp_iters_max = 0;
        s.stability_warnings = 0;
        return go_on;
    };
    if (!emit(pending)) return result;

    for (std::size_t k = 1; k <= steps; ++k) {
        const StepInfo info = step(pending.state);
        pending.state.time = t0 + static_cast<double>(k) * dt;
        result.fp_iters_max = std::max(result.fp_iters_max, info.fp_iters);
        pending.fp_iters_max = std::max(pending.fp_iters_max, info.fp_iters);
        if (info.stability_warning) {
            ++pending.stability_warnings;
            ++result.stability_warnings;
        }
        if (!info.converged) {
            result.status = RunStatus::NonConvergence;
            return result;
        }
        result.steps_taken = k;
        if (k % sample_every == 0 && !emit(pending)) return result;
    }
    return result;
}

} // namespace mkdv
