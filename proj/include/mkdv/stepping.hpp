#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

/// Outcome of one implicit-midpoint step.
struct StepInfo {
    int fp_iters = 0;
    bool converged = true;
    double mu = 0.0;                  ///< max of the squared midpoint field
    bool stability_warning = false;   ///< 3 mu dt / 2 >= 1
};

/// Raised where a caller cannot continue past an unconverged fixed point.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(double time, int iters)
        : std::runtime_error("fixed-point iteration did not converge at t=" +
                             std::to_string(time) + " after " + std::to_string(iters) +
                             " iterations"),
          time_(time), iters_(iters) {}
    double time() const noexcept { return time_; }
    int iterations() const noexcept { return iters_; }

private:
    double time_;
    int iters_;
};

enum class RunStatus { Completed, NonConvergence };

/// A sampled state plus solver statistics accumulated since the previous sample.
struct RunSample {
    FieldState state;
    int fp_iters_max = 0;
    int stability_warnings = 0;
};

struct RunResult {
    std::vector<RunSample> samples;
    RunStatus status = RunStatus::Completed;
    std::size_t steps_taken = 0;
    int fp_iters_max = 0;
    std::size_t stability_warnings = 0;
};

/// Receives samples as they are produced; return false to stop the run.
using SampleSink = std::function<bool(const RunSample&)>;

/// Number of whole steps of size dt that fit in T (rounding-tolerant).
std::size_t step_count(double T, double dt);

} // namespace mkdv

namespace mkdv {

/// Advances `current` in place by one step and reports the step statistics.
using StepFunction = std::function<StepInfo(FieldState& current)>;

/// Shared time loop: takes step_count(T, dt) steps, emits the initial state and
/// every sample_every-th state to `sink` (when set) and to the result. Stops
/// early with RunStatus::NonConvergence at the first unconverged step, keeping
/// the samples produced so far. Sample times are k*dt, not accumulated sums.
RunResult drive(FieldState initial, double T, double dt, std::size_t sample_every,
                const StepFunction& step, const SampleSink& sink = {},
                bool keep_samples = true);

} // namespace mkdv
