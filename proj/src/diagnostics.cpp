#include "mkdv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mkdv {
namespace {

// Vertex of the parabola through (-1, ym), (0, y0), (1, yp): offset in [-0.5, 0.5]
// and the interpolated value.
std::pair<double, double> parabolic_vertex(double ym, double y0, double yp) {
    const double curvature = ym - 2.0 * y0 + yp;
    if (curvature == 0.0) return {0.0, y0};
    const double delta = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
    return {delta, y0 - 0.25 * (ym - yp) * delta};
}

double least_squares_slope(std::span<const double> x, std::span<const double> y,
                           double* intercept = nullptr) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (intercept) *intercept = my - slope * mx;
    return slope;
}

double rms_residual(std::span<const double> x, std::span<const double> y, double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (a + b * x[i]);
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(x.size()));
}

} // namespace

double default_prominence(std::span<const double> u0) {
    double m = 0.0;
    for (double v : u0) m = std::max(m, std::abs(v));
    return std::max(0.05 * m, std::numeric_limits<double>::min());
}

ExtremaSet find_extrema(std::span<const double> u, const PeriodicGrid& grid, double prominence) {
    if (!(prominence > 0.0)) throw std::invalid_argument("prominence must be positive");
    if (u.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
    const std::size_t n = u.size();
    std::vector<std::pair<double, double>> found;
    for (std::size_t i = 0; i < n; ++i) {
        const double ym = u[i == 0 ? n - 1 : i - 1];
        const double y0 = u[i];
        const double yp = u[i + 1 == n ? 0 : i + 1];
        const double left = y0 - ym;
        const double right = yp - y0;
        const bool is_max = left > 0.0 && right <= 0.0;
        const bool is_min = left < 0.0 && right >= 0.0;
        if (!is_max && !is_min) continue;
        const auto [delta, value] = parabolic_vertex(ym, y0, yp);
        if (std::abs(value) < prominence) continue;
        found.emplace_back(grid.wrap_position(grid.node(i) + delta * grid.dx()), value);
    }
    std::sort(found.begin(), found.end());
    ExtremaSet out;
    for (const auto& [x, v] : found) {
        out.positions.push_back(x);
        out.values.push_back(v);
    }
    return out;
}

namespace {

std::optional<std::pair<std::size_t, std::size_t>> dominant_pair(const ExtremaSet& e) {
    std::optional<std::size_t> hi, lo;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e.values[i] > 0.0 && (!hi || e.values[i] > e.values[*hi])) hi = i;
        if (e.values[i] < 0.0 && (!lo || e.values[i] < e.values[*lo])) lo = i;
    }
    if (!hi || !lo) return std::nullopt;
    return std::make_pair(*hi, *lo);
}

} // namespace

std::optional<double> signed_separation(const ExtremaSet& extrema, const PeriodicGrid& grid) {
    const auto pair = dominant_pair(extrema);
    if (!pair) return std::nullopt;
    return grid.wrap_displacement(extrema.positions[pair->first] -
                                  extrema.positions[pair->second]);
}

std::optional<double> hump_separation(const ExtremaSet& extrema) {
    const auto pair = dominant_pair(extrema);
    if (!pair) return std::nullopt;
    return std::abs(extrema.positions[pair->first] - extrema.positions[pair->second]);
}

std::optional<double> hump_separation(const ExtremaSet& extrema, const PeriodicGrid& grid) {
    const auto s = signed_separation(extrema, grid);
    if (!s) return std::nullopt;
    return std::abs(*s);
}

double SeparationTracker::update(double raw) {
    double value = raw;
    if (last_) value += std::round((*last_ - raw) / period_) * period_;
    last_ = value;
    return value;
}

std::string_view to_string(GrowthModel m) noexcept {
    return m == GrowthModel::Logarithmic ? "LOGARITHMIC" : "LINEAR";
}

SeparationFit fit_separation_growth(std::span<const std::pair<double, double>> series) {
    if (series.size() < 8) {
        throw std::invalid_argument("separation fit needs at least 8 samples");
    }
    std::vector<double> t, lt, l;
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = 0.0;
    for (const auto& [ti, li] : series) {
        if (!(ti > 0.0)) throw std::invalid_argument("separation fit needs t > 0");
        t.push_back(ti);
        lt.push_back(std::log(ti));
        l.push_back(li);
        t_min = std::min(t_min, ti);
        t_max = std::max(t_max, ti);
    }
    if (t_max < 4.0 * t_min) {
        throw std::invalid_argument("separation fit needs samples spanning a factor of 4 in t");
    }
    SeparationFit fit;
    fit.log_b = least_squares_slope(lt, l, &fit.log_a);
    fit.lin_d = least_squares_slope(t, l, &fit.lin_c);
    fit.log_residual = rms_residual(lt, l, fit.log_a, fit.log_b);
    fit.lin_residual = rms_residual(t, l, fit.lin_c, fit.lin_d);
    fit.model = fit.lin_residual < fit.log_residual ? GrowthModel::Linear
                                                    : GrowthModel::Logarithmic;
    return fit;
}

double envelope_position(std::span<const double> u, const PeriodicGrid& grid, double window) {
    const std::size_t n = u.size();
    if (n != grid.size()) throw std::invalid_argument("field size does not match grid");
    const auto half = static_cast<std::ptrdiff_t>(
        std::max<long>(0, std::lround(0.5 * window / grid.dx())));
    const auto sn = static_cast<std::ptrdiff_t>(n);

    std::vector<double> peak(n);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        double m = 0.0;
        for (std::ptrdiff_t o = -half; o <= half; ++o) m = std::max(m, std::abs(u[wrap_index(i + o, n)]));
        peak[static_cast<std::size_t>(i)] = m;
    }
    std::vector<double> smooth(n);
    const double norm = 1.0 / static_cast<double>(2 * half + 1);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        double s = 0.0;
        for (std::ptrdiff_t o = -half; o <= half; ++o) s += peak[wrap_index(i + o, n)];
        smooth[static_cast<std::size_t>(i)] = s * norm;
    }
    const auto it = std::max_element(smooth.begin(), smooth.end());
    const auto i = static_cast<std::ptrdiff_t>(it - smooth.begin());
    const auto [delta, value] =
        parabolic_vertex(smooth[wrap_index(i - 1, n)], *it, smooth[wrap_index(i + 1, n)]);
    (void)value;
    return grid.wrap_position(grid.node(static_cast<std::size_t>(i)) + delta * grid.dx());
}

double estimate_carrier_wavelength(std::span<const double> u, const PeriodicGrid& grid) {
    const std::size_t n = u.size();
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    const double threshold = 0.1 * m;
    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if ((u[i] < 0.0) == (u[i + 1] < 0.0)) continue;
        if (std::max(std::abs(u[i]), std::abs(u[i + 1])) <= threshold) continue;
        const double f = u[i] / (u[i] - u[i + 1]);
        crossings.push_back(grid.node(i) + f * grid.dx());
    }
    if (crossings.size() < 2) return 4.0 * grid.dx();
    std::vector<double> gaps;
    for (std::size_t i = 1; i < crossings.size(); ++i) gaps.push_back(crossings[i] - crossings[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<long>(gaps.size() / 2), gaps.end());
    return 2.0 * gaps[gaps.size() / 2];
}

double envelope_velocity(std::span<const FieldState> frames, const PeriodicGrid& grid,
                         double window) {
    if (frames.size() < 2) throw std::invalid_argument("envelope velocity needs at least 2 frames");
    if (!(window > 0.0)) window = estimate_carrier_wavelength(frames.front().values, grid);
    std::vector<double> t, x;
    SeparationTracker unwrap(grid.period());
    for (const FieldState& f : frames) {
        t.push_back(f.time);
        x.push_back(unwrap.update(envelope_position(f.values, grid, window)));
    }
    return least_squares_slope(t, x);
}

std::vector<DiagnosticsRecord> diagnose(std::span<const FieldState> frames,
                                        const PeriodicGrid& grid, double prominence) {
    std::vector<DiagnosticsRecord> out;
    out.reserve(frames.size());
    SeparationTracker tracker(grid.period());
    for (const FieldState& f : frames) {
        DiagnosticsRecord r;
        r.time = f.time;
        r.invariants = discrete_invariants(f, grid);
        r.extrema = find_extrema(f.values, grid, prominence);
        if (auto s = signed_separation(r.extrema, grid)) r.separation = tracker.update(*s);
        out.push_back(std::move(r));
    }
    return out;
}

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::DoublePole: return "DOUBLE_POLE";
        case Regime::TwoSolitons: return "TWO_SOLITONS";
        case Regime::Breather: return "BREATHER";
        case Regime::Undetermined: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

RegimeLabel classify_regime(std::span<const DiagnosticsRecord> records,
                            const RegimeConfig& config) {
    RegimeLabel result;
    RegimeEvidence& ev = result.evidence;
    if (records.empty()) return result;

    ev.window_sufficient = records.size() >= config.min_samples &&
                           records.back().time - records.front().time >= config.min_time_range;

    std::vector<InvariantTriple> inv;
    inv.reserve(records.size());
    for (const auto& r : records) inv.push_back(r.invariants);
    const DriftReport drift = drift_report(inv, config.l3_jump_threshold);
    ev.l3_event = drift.l3_event.has_value();
    if (drift.l3_event) ev.l3_event_time = records[*drift.l3_event].time;

    ev.beta = config.beta > 0.0 ? config.beta : records.front().invariants.l2 / 4.0;

    // Amplitudes over the last quarter of the window.
    const std::size_t tail_start = records.size() - std::max<std::size_t>(1, records.size() / 4);
    double pos_sum = 0.0, neg_sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t k = tail_start; k < records.size(); ++k) {
        const ExtremaSet& e = records[k].extrema;
        double hi = 0.0, lo = 0.0;
        for (double v : e.values) {
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        if (hi > 0.0 && lo < 0.0) {
            pos_sum += hi;
            neg_sum -= lo;
            ++counted;
        }
    }
    if (counted > 0) {
        ev.amplitude_positive = pos_sum / static_cast<double>(counted);
        ev.amplitude_negative = neg_sum / static_cast<double>(counted);
        const double mean = 0.5 * (ev.amplitude_positive + ev.amplitude_negative);
        ev.asymmetry = std::abs(ev.amplitude_positive - ev.amplitude_negative) / mean;
    }

    // Growth fit on |separation| after the fit start.
    std::vector<std::pair<double, double>> series;
    for (const auto& r : records) {
        if (r.separation && r.time >= config.fit_start_time && r.time > 0.0) {
            series.emplace_back(r.time, std::abs(*r.separation));
        }
    }
    try {
        ev.fit = fit_separation_growth(series);
    } catch (const std::invalid_argument&) {
        ev.fit.reset();
    }

    // Separation behaviour after the 𝓛₃ event: sign flips with hysteresis and
    // absence of growth between the two halves of the post-event window.
    if (drift.l3_event) {
        const double hysteresis = 1.0 / std::max(ev.beta, 1e-12);
        std::vector<double> post;
        for (std::size_t k = *drift.l3_event; k < records.size(); ++k) {
            if (records[k].separation) post.push_back(*records[k].separation);
        }
        int sign = 0;
        std::vector<double> flip_times;
        for (std::size_t k = *drift.l3_event; k < records.size(); ++k) {
            if (!records[k].separation) continue;
            const double s = *records[k].separation;
            if (std::abs(s) <= hysteresis) continue;
            const int sg = s > 0.0 ? 1 : -1;
            if (sign != 0 && sg != sign) {
                ++ev.sign_flips;
                flip_times.push_back(records[k].time);
            }
            sign = sg;
        }
        if (post.size() >= 4) {
            const std::size_t mid = post.size() / 2;
            double first = 0.0, second = 0.0;
            for (std::size_t i = 0; i < mid; ++i) first = std::max(first, std::abs(post[i]));
            for (std::size_t i = mid; i < post.size(); ++i) second = std::max(second, std::abs(post[i]));
            ev.bounded_separation = second <= 1.25 * first;
        }
        if (flip_times.size() >= 2) {
            const double half_period = (flip_times.back() - flip_times.front()) /
                                       static_cast<double>(flip_times.size() - 1);
            if (half_period > 0.0) {
                ev.alpha_estimate =
                    std::numbers::pi / (2.0 * ev.beta * ev.beta * half_period);
            }
        }
    }

    if (!ev.window_sufficient) return result;

    if (ev.l3_event && ev.bounded_separation && ev.sign_flips >= config.min_sign_flips) {
        result.label = Regime::Breather;
    } else if (ev.fit && ev.fit->model == GrowthModel::Linear &&
               ev.asymmetry > config.asymmetry_threshold) {
        result.label = Regime::TwoSolitons;
    } else if (ev.fit && ev.fit->model == GrowthModel::Logarithmic &&
               std::abs(ev.fit->log_b - 2.0 / ev.beta) <=
                   config.log_slope_tolerance * 2.0 / ev.beta &&
               ev.asymmetry < config.asymmetry_threshold) {
        result.label = Regime::DoublePole;
    }
    return result;
}

} // namespace mkdv
