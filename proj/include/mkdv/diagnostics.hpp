#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/invariants.hpp"

namespace mkdv {

/// Local extrema of a periodic sample vector, ordered by position.
struct ExtremaSet {
    std::vector<double> positions;  ///< sub-grid refined, wrapped into [-L, L)
    std::vector<double> values;     ///< signed refined amplitudes

    std::size_t size() const noexcept { return positions.size(); }
    bool empty() const noexcept { return positions.empty(); }
};

/// 0.05 * max|u0|, floored at the smallest positive normal double so that a
/// zero field still yields a valid (positive) threshold.
double default_prominence(std::span<const double> u0);

/// Sign changes of the periodic first difference, refined by a parabola through
/// the three samples around each discrete extremum. Extrema with
/// |value| < prominence are dropped. Throws std::invalid_argument for
/// prominence <= 0.
ExtremaSet find_extrema(std::span<const double> u, const PeriodicGrid& grid, double prominence);

/// Position of the largest positive extremum minus that of the most negative
/// one, reduced to the minimal periodic image. Empty if either is missing.
std::optional<double> signed_separation(const ExtremaSet& extrema, const PeriodicGrid& grid);

/// |signed_separation| without a grid: plain distance between the two humps.
std::optional<double> hump_separation(const ExtremaSet& extrema);
std::optional<double> hump_separation(const ExtremaSet& extrema, const PeriodicGrid& grid);

/// Follows a signed separation through time, choosing at each frame the
/// periodic image nearest to the previous value so that separations may grow
/// past the domain length.
class SeparationTracker {
public:
    explicit SeparationTracker(double period) : period_(period) {}
    double update(double raw);
    std::optional<double> last() const noexcept { return last_; }

private:
    double period_;
    std::optional<double> last_;
};

enum class GrowthModel { Logarithmic, Linear };
std::string_view to_string(GrowthModel m) noexcept;

struct SeparationFit {
    GrowthModel model = GrowthModel::Logarithmic;
    double log_a = 0.0, log_b = 0.0;  ///< l = a + b ln t
    double lin_c = 0.0, lin_d = 0.0;  ///< l = c + d t
    double log_residual = 0.0;        ///< RMS residual of each fit
    double lin_residual = 0.0;
    double residual() const noexcept {
        return model == GrowthModel::Logarithmic ? log_residual : lin_residual;
    }
};

/// Least-squares fits of both growth laws; returns the one with smaller
/// residual. Needs >= 8 samples, all t > 0, and max t >= 4 min t; throws
/// std::invalid_argument otherwise.
SeparationFit fit_separation_growth(std::span<const std::pair<double, double>> series);

/// Envelope peak of |u| smoothed by a moving maximum and a box filter of width
/// `window` (one carrier wavelength), refined parabolically.
double envelope_position(std::span<const double> u, const PeriodicGrid& grid, double window);

/// Carrier wavelength estimated from the mean spacing of sign changes where
/// |u| exceeds 10% of its maximum. Falls back to 4 dx.
double estimate_carrier_wavelength(std::span<const double> u, const PeriodicGrid& grid);

/// Least-squares slope of the periodically unwrapped envelope position versus
/// time. window <= 0 estimates it from the first frame. Throws
/// std::invalid_argument for fewer than two frames.
double envelope_velocity(std::span<const FieldState> frames, const PeriodicGrid& grid,
                         double window = 0.0);

struct DiagnosticsRecord {
    double time = 0.0;
    InvariantTriple invariants;
    ExtremaSet extrema;
    std::optional<double> separation;  ///< signed, time-unwrapped
};

/// Builds records for a sequence of frames with a shared prominence and a
/// single separation tracker.
std::vector<DiagnosticsRecord> diagnose(std::span<const FieldState> frames,
                                        const PeriodicGrid& grid, double prominence);

enum class Regime { DoublePole, TwoSolitons, Breather, Undetermined };
std::string_view to_string(Regime r) noexcept;

struct RegimeConfig {
    std::size_t min_samples = 200;
    double min_time_range = 20.0;
    double fit_start_time = 10.0;
    double asymmetry_threshold = 0.02;
    double log_slope_tolerance = 0.25;  ///< relative to 2 / beta
    double l3_jump_threshold = kDefaultL3JumpThreshold;
    int min_sign_flips = 2;
    double beta = 0.0;  ///< <= 0: inferred as 𝓛₂(0) / 4
};

struct RegimeEvidence {
    std::optional<SeparationFit> fit;
    double amplitude_positive = 0.0;  ///< mean over the last quarter of the window
    double amplitude_negative = 0.0;  ///< magnitude, same averaging
    double asymmetry = 0.0;           ///< |A+ - A-| / mean(A+, A-)
    bool l3_event = false;
    std::optional<double> l3_event_time;
    int sign_flips = 0;               ///< of the separation after the event
    bool bounded_separation = false;
    double beta = 0.0;
    std::optional<double> alpha_estimate;  ///< informational only
    bool window_sufficient = false;
};

struct RegimeLabel {
    Regime label = Regime::Undetermined;
    RegimeEvidence evidence;
};

/// Rules, in order:
///  BREATHER     𝓛₃ jump event, then a bounded separation that flips sign;
///  TWO_SOLITONS linear growth and amplitude asymmetry above threshold;
///  DOUBLE_POLE  logarithmic growth with b within tolerance of 2/beta and
///               asymmetry below threshold;
///  UNDETERMINED otherwise, or while the window is too short.
RegimeLabel classify_regime(std::span<const DiagnosticsRecord> records,
                            const RegimeConfig& config = {});

} // namespace mkdv
