#include "mkdv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "mkdv/fd_solver.hpp"
#include "mkdv/spectral_solver.hpp"

namespace mkdv {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

double to_double(const std::string& key, std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + s + "'");
    }
    return v;
}

template <class Int>
Int to_integer(const std::string& key, std::string_view text) {
    const std::string_view s = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected a nonnegative integer, got '" + std::string(s) + "'");
    }
    return v;
}

bool to_bool(const std::string& key, std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key, "expected a boolean, got '" + s + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, std::string_view)>;

struct KeySpec {
    const char* key;
    Setter set;
};

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> keys = {
        {"run.name", [](auto& c, auto&, auto v) { c.name = std::string(trim(v)); }},
        {"solution.family",
         [](auto& c, auto& k, auto v) {
             try {
                 c.solution.family = parse_family(lower(trim(v)));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"solution.alpha", [](auto& c, auto& k, auto v) { c.solution.alpha = to_double(k, v); }},
        {"solution.beta", [](auto& c, auto& k, auto v) { c.solution.beta = to_double(k, v); }},
        {"solution.x_shift", [](auto& c, auto& k, auto v) { c.solution.x_shift = to_double(k, v); }},
        {"solution.t_shift", [](auto& c, auto& k, auto v) { c.solution.t_shift = to_double(k, v); }},
        {"solution.scale", [](auto& c, auto& k, auto v) { c.scale = to_double(k, v); }},
        {"grid.L", [](auto& c, auto& k, auto v) { c.L = to_double(k, v); }},
        {"grid.N", [](auto& c, auto& k, auto v) { c.N = to_integer<std::size_t>(k, v); }},
        {"scheme.kind",
         [](auto& c, auto& k, auto v) {
             try {
                 c.scheme.kind = parse_scheme(lower(trim(v)));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"scheme.dt", [](auto& c, auto& k, auto v) { c.scheme.dt = to_double(k, v); }},
        {"scheme.fp_tol", [](auto& c, auto& k, auto v) { c.scheme.fp_tol = to_double(k, v); }},
        {"scheme.fp_max_iter",
         [](auto& c, auto& k, auto v) { c.scheme.fp_max_iter = to_integer<int>(k, v); }},
        {"scheme.dealias", [](auto& c, auto& k, auto v) { c.scheme.dealias = to_bool(k, v); }},
        {"run.T", [](auto& c, auto& k, auto v) { c.T = to_double(k, v); }},
        {"run.sample_stride",
         [](auto& c, auto& k, auto v) { c.sample_stride = to_integer<std::size_t>(k, v); }},
        {"diagnostics.prominence",
         [](auto& c, auto& k, auto v) {
             if (lower(trim(v)) == "auto") {
                 c.prominence.reset();
             } else {
                 c.prominence = to_double(k, v);
             }
         }},
        {"diagnostics.l3_jump_threshold",
         [](auto& c, auto& k, auto v) { c.l3_jump_threshold = to_double(k, v); }},
        {"diagnostics.envelope_window",
         [](auto& c, auto& k, auto v) { c.envelope_window = to_double(k, v); }},
        {"regime.min_samples",
         [](auto& c, auto& k, auto v) { c.regime.min_samples = to_integer<std::size_t>(k, v); }},
        {"regime.min_time_range",
         [](auto& c, auto& k, auto v) { c.regime.min_time_range = to_double(k, v); }},
        {"regime.fit_start",
         [](auto& c, auto& k, auto v) { c.regime.fit_start_time = to_double(k, v); }},
        {"regime.asymmetry_threshold",
         [](auto& c, auto& k, auto v) { c.regime.asymmetry_threshold = to_double(k, v); }},
        {"regime.log_slope_tolerance",
         [](auto& c, auto& k, auto v) { c.regime.log_slope_tolerance = to_double(k, v); }},
        {"regime.min_sign_flips",
         [](auto& c, auto& k, auto v) { c.regime.min_sign_flips = to_integer<int>(k, v); }},
        {"regime.beta", [](auto& c, auto& k, auto v) { c.regime.beta = to_double(k, v); }},
        {"perturbation.amplitude",
         [](auto& c, auto& k, auto v) { c.perturbation_amplitude = to_double(k, v); }},
        {"seed", [](auto& c, auto& k, auto v) { c.seed = to_integer<std::uint64_t>(k, v); }},
    };
    return keys;
}

const std::map<std::string, std::string, std::less<>>& aliases() {
    static const std::map<std::string, std::string, std::less<>> a = {
        {"name", "run.name"},
        {"solution", "solution.family"},
        {"family", "solution.family"},
        {"alpha", "solution.alpha"},
        {"beta", "solution.beta"},
        {"x_shift", "solution.x_shift"},
        {"t_shift", "solution.t_shift"},
        {"scale", "solution.scale"},
        {"L", "grid.L"},
        {"N", "grid.N"},
        {"scheme", "scheme.kind"},
        {"dt", "scheme.dt"},
        {"fp_tol", "scheme.fp_tol"},
        {"fp_max_iter", "scheme.fp_max_iter"},
        {"dealias", "scheme.dealias"},
        {"T", "run.T"},
        {"sample_stride", "run.sample_stride"},
        {"stride", "run.sample_stride"},
        {"prominence", "diagnostics.prominence"},
        {"l3_jump_threshold", "diagnostics.l3_jump_threshold"},
        {"envelope_window", "diagnostics.envelope_window"},
        {"perturbation", "perturbation.amplitude"},
    };
    return a;
}

void check(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

} // namespace

std::string_view to_string(SchemeKind k) noexcept {
    switch (k) {
        case SchemeKind::Spectral: return "spectral";
        case SchemeKind::Fd1: return "fd1";
        case SchemeKind::Fd2: return "fd2";
    }
    return "spectral";
}

SchemeKind parse_scheme(std::string_view name) {
    if (name == "spectral") return SchemeKind::Spectral;
    if (name == "fd1") return SchemeKind::Fd1;
    if (name == "fd2") return SchemeKind::Fd2;
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected spectral, fd1 or fd2)");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 6; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

void ExperimentConfig::validate() const {
    check(solution.beta > 0.0, "solution.beta", "beta must be positive");
    const bool needs_alpha = solution.family == SolutionFamily::Breather ||
                             solution.family == SolutionFamily::ApproxBreather;
    check(!needs_alpha || solution.alpha > 0.0, "solution.alpha",
          "alpha must be positive for the breather families");
    check(solution.alpha >= 0.0, "solution.alpha", "alpha must be nonnegative");
    check(std::isfinite(scale), "solution.scale", "scale must be finite");
    check(L > 0.0, "grid.L", "L must be positive");
    check(N >= 5 && N % 2 == 0, "grid.N", "N must be even and at least 6");
    check(scheme.kind != SchemeKind::Spectral || is_power_of_two(N), "grid.N",
          "spectral scheme needs N to be a power of two");
    check(scheme.dt > 0.0, "scheme.dt", "dt must be positive");
    check(scheme.fp_tol > 0.0, "scheme.fp_tol", "fp_tol must be positive");
    check(scheme.fp_max_iter >= 1, "scheme.fp_max_iter", "fp_max_iter must be at least 1");
    check(T > 0.0, "run.T", "T must be positive");
    check(sample_stride >= 1, "run.sample_stride", "sample_stride must be at least 1");
    check(!prominence || *prominence > 0.0, "diagnostics.prominence",
          "prominence must be positive");
    check(l3_jump_threshold >= 0.0, "diagnostics.l3_jump_threshold",
          "l3_jump_threshold must be nonnegative");
    check(perturbation_amplitude >= 0.0, "perturbation.amplitude",
          "perturbation amplitude must be nonnegative");
    check(regime.asymmetry_threshold >= 0.0, "regime.asymmetry_threshold",
          "asymmetry threshold must be nonnegative");
}

ConfigDocument parse_document(std::string_view text) {
    ConfigDocument doc;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t sep = line.find_first_of("=:");
        if (sep == std::string_view::npos) {
            throw ConfigError("", "line " + std::to_string(line_no) +
                                      ": expected 'key = value', got '" + std::string(line) + "'");
        }
        ConfigEntry e{std::string(trim(line.substr(0, sep))),
                      std::string(trim(line.substr(sep + 1))), line_no};
        if (e.key.empty()) {
            throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
        }
        for (const auto& prev : doc) {
            if (canonical_key(prev.key) == canonical_key(e.key)) {
                throw ConfigError(e.key, "duplicate key (line " + std::to_string(line_no) + ")");
            }
        }
        doc.push_back(std::move(e));
        if (eol == text.size()) break;
    }
    return doc;
}

std::string canonical_key(std::string_view key) {
    for (const auto& spec : schema()) {
        if (key == spec.key) return spec.key;
    }
    if (const auto it = aliases().find(key); it != aliases().end()) return it->second;
    throw ConfigError(std::string(key), "unknown key");
}

ExperimentConfig resolve_config(const ConfigDocument& doc) {
    ExperimentConfig config;
    for (const auto& e : doc) {
        const std::string key = canonical_key(e.key);
        if (e.value.find(',') != std::string::npos) {
            throw ConfigError(key, "value lists are only allowed in sweep files");
        }
        for (const auto& spec : schema()) {
            if (key == spec.key) spec.set(config, key, e.value);
        }
    }
    config.validate();
    return config;
}

ExperimentConfig parse_config(std::string_view text) { return resolve_config(parse_document(text)); }

std::vector<ConfigDocument> expand_sweep(const ConfigDocument& doc) {
    std::vector<ConfigDocument> out{ConfigDocument{}};
    for (const auto& e : doc) {
        std::vector<std::string> values;
        std::string_view rest = e.value;
        while (true) {
            const std::size_t comma = rest.find(',');
            values.emplace_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        std::vector<ConfigDocument> next;
        next.reserve(out.size() * values.size());
        for (const auto& partial : out) {
            for (const auto& v : values) {
                ConfigDocument d = partial;
                d.push_back({e.key, v, e.line});
                next.push_back(std::move(d));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& c) {
    const auto d = format_double;
    return {
        {"run.name", c.name},
        {"solution.family", std::string(to_string(c.solution.family))},
        {"solution.alpha", d(c.solution.alpha)},
        {"solution.beta", d(c.solution.beta)},
        {"solution.x_shift", d(c.solution.x_shift)},
        {"solution.t_shift", d(c.solution.t_shift)},
        {"solution.scale", d(c.scale)},
        {"grid.L", d(c.L)},
        {"grid.N", std::to_string(c.N)},
        {"scheme.kind", std::string(to_string(c.scheme.kind))},
        {"scheme.dt", d(c.scheme.dt)},
        {"scheme.fp_tol", d(c.scheme.fp_tol)},
        {"scheme.fp_max_iter", std::to_string(c.scheme.fp_max_iter)},
        {"scheme.dealias", c.scheme.dealias ? "true" : "false"},
        {"run.T", d(c.T)},
        {"run.sample_stride", std::to_string(c.sample_stride)},
        {"diagnostics.prominence", c.prominence ? d(*c.prominence) : "auto"},
        {"diagnostics.l3_jump_threshold", d(c.l3_jump_threshold)},
        {"diagnostics.envelope_window", d(c.envelope_window)},
        {"regime.min_samples", std::to_string(c.regime.min_samples)},
        {"regime.min_time_range", d(c.regime.min_time_range)},
        {"regime.fit_start", d(c.regime.fit_start_time)},
        {"regime.asymmetry_threshold", d(c.regime.asymmetry_threshold)},
        {"regime.log_slope_tolerance", d(c.regime.log_slope_tolerance)},
        {"regime.min_sign_flips", std::to_string(c.regime.min_sign_flips)},
        {"regime.beta", d(c.regime.beta)},
        {"perturbation.amplitude", d(c.perturbation_amplitude)},
        {"seed", std::to_string(c.seed)},
    };
}

FieldState initial_field(const ExperimentConfig& config, const PeriodicGrid& grid) {
    FieldState u = sample(config.solution, grid, 0.0);
    for (double& v : u.values) v *= config.scale;
    if (config.perturbation_amplitude > 0.0) {
        std::mt19937_64 rng(config.seed);
        std::uniform_real_distribution<double> noise(-1.0, 1.0);
        for (double& v : u.values) v += config.perturbation_amplitude * noise(rng);
    }
    return u;
}

RunReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    auto grid = std::make_shared<const PeriodicGrid>(config.L, config.N);
    FieldState init = initial_field(config, *grid);

    const double prominence = config.prominence.value_or(default_prominence(init.values));
    double window = config.envelope_window;
    if (!(window > 0.0)) {
        window = config.solution.alpha > 0.0 &&
                         config.solution.family != SolutionFamily::Soliton &&
                         config.solution.family != SolutionFamily::DoublePole
                     ? 2.0 * std::numbers::pi / config.solution.alpha
                     : estimate_carrier_wavelength(init.values, *grid);
    }

    RunReport report;
    report.config = config;
    std::vector<DiagnosticsRecord> records;
    SeparationTracker tracker(grid->period());
    const SampleSink sink = [&](const RunSample& s) {
        DiagnosticsRecord rec;
        rec.time = s.state.time;
        rec.invariants = discrete_invariants(s.state, *grid);
        rec.extrema = find_extrema(s.state.values, *grid, prominence);
        if (auto sep = signed_separation(rec.extrema, *grid)) rec.separation = tracker.update(*sep);
        ReportRow row;
        row.t = rec.time;
        row.invariants = rec.invariants;
        row.separation = rec.separation;
        row.n_extrema = rec.extrema.size();
        if (!rec.extrema.empty()) row.env_position = envelope_position(s.state.values, *grid, window);
        row.fp_iters_max = s.fp_iters_max;
        row.warnings = s.stability_warnings;
        report.rows.push_back(row);
        records.push_back(std::move(rec));
        return true;
    };

    RunResult result;
    if (config.scheme.kind == SchemeKind::Spectral) {
        SpectralSchemeConfig sc{config.scheme.dt, config.scheme.fp_tol, config.scheme.fp_max_iter,
                                config.scheme.dealias};
        result = run_spectral(sc, grid, std::move(init), config.T, config.sample_stride, sink, false);
    } else {
        FdSchemeConfig fc{config.scheme.kind == SchemeKind::Fd1 ? Nonlinearity::M1 : Nonlinearity::M2,
                          config.scheme.dt, config.scheme.fp_tol, config.scheme.fp_max_iter};
        result = run_fd(fc, *grid, std::move(init), config.T, config.sample_stride, sink, false);
    }

    report.status = result.status;
    report.steps_taken = result.steps_taken;
    report.fp_iters_max = result.fp_iters_max;
    report.stability_warnings = result.stability_warnings;
    if (result.status == RunStatus::NonConvergence) {
        report.status_message = "fixed-point iteration did not converge within " +
                                std::to_string(config.scheme.fp_max_iter) +
                                " iterations at step " + std::to_string(result.steps_taken + 1);
    }

    std::vector<InvariantTriple> series;
    for (const auto& r : report.rows) series.push_back(r.invariants);
    report.drift = drift_report(series, config.l3_jump_threshold);
    RegimeConfig rc = config.regime;
    rc.l3_jump_threshold = config.l3_jump_threshold;
    report.regime = classify_regime(records, rc);
    return report;
}

namespace {

template <class Job>
std::vector<SweepEntry> run_pool(std::size_t count, unsigned threads, const Job& job) {
    std::vector<SweepEntry> out(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i].report = job(i);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (n <= 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

} // namespace

std::vector<SweepEntry> sweep(std::span<const ExperimentConfig> configs, unsigned threads) {
    return run_pool(configs.size(), threads, [&](std::size_t i) { return run_experiment(configs[i]); });
}

std::vector<SweepEntry> sweep_documents(std::span<const ConfigDocument> docs, unsigned threads) {
    return run_pool(docs.size(), threads,
                    [&](std::size_t i) { return run_experiment(resolve_config(docs[i])); });
}

void write_run_csv(std::ostream& out, const RunReport& report) {
    for (const auto& [k, v] : echo_config(report.config)) out << "# " << k << " = " << v << '\n';
    out << "# derived.dx = " << format_double(2.0 * report.config.L / static_cast<double>(report.config.N))
        << '\n';
    out << kRunCsvHeader << '\n';
    for (const auto& r : report.rows) {
        out << format_double(r.t) << ',' << format_double(r.invariants.l1) << ','
            << format_double(r.invariants.l2) << ',' << format_double(r.invariants.l3) << ','
            << opt(r.separation) << ',' << r.n_extrema << ',' << opt(r.env_position) << ','
            << r.fp_iters_max << ',' << r.warnings << '\n';
    }
    const RegimeEvidence& ev = report.regime.evidence;
    out << "# status = "
        << (report.status == RunStatus::Completed ? "completed" : "nonconvergence") << '\n';
    if (!report.status_message.empty()) out << "# status_message = " << report.status_message << '\n';
    out << "# steps_taken = " << report.steps_taken << '\n';
    out << "# fp_iters_max = " << report.fp_iters_max << '\n';
    out << "# stability_warnings = " << report.stability_warnings << '\n';
    out << "# regime = " << to_string(report.regime.label) << '\n';
    if (ev.fit) {
        out << "# fit_model = " << to_string(ev.fit->model) << '\n';
        out << "# fit_log = " << format_double(ev.fit->log_a) << " + "
            << format_double(ev.fit->log_b) << " ln t\n";
        out << "# fit_linear = " << format_double(ev.fit->lin_c) << " + "
            << format_double(ev.fit->lin_d) << " t\n";
    }
    out << "# amplitudes = " << format_double(ev.amplitude_positive) << " "
        << format_double(ev.amplitude_negative) << '\n';
    out << "# asymmetry = " << format_double(ev.asymmetry) << '\n';
    out << "# sign_flips = " << ev.sign_flips << '\n';
    if (ev.alpha_estimate) out << "# alpha_estimate = " << format_double(*ev.alpha_estimate) << '\n';
    out << "# l3_event_time = " << opt(ev.l3_event_time) << '\n';
    out << "# drift = " << format_double(report.drift.max_abs_drift_l1) << " "
        << format_double(report.drift.max_abs_drift_l2) << " "
        << format_double(report.drift.max_abs_drift_l3) << '\n';
}

void write_sweep_summary(std::ostream& out, std::span<const SweepEntry> entries) {
    out << "id,name,scheme,dt,N,L,status,regime,l3_event_time,drift_l1,drift_l2,drift_l3,"
           "amplitude_positive,amplitude_negative,error\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const SweepEntry& e = entries[i];
        out << i << ',';
        if (!e.report) {
            out << ",,,,,failed,,,,,,,," << csv_quote(e.error) << '\n';
            continue;
        }
        const RunReport& r = *e.report;
        const RegimeEvidence& ev = r.regime.evidence;
        out << csv_quote(r.config.name) << ',' << to_string(r.config.scheme.kind) << ','
            << format_double(r.config.scheme.dt) << ',' << r.config.N << ','
            << format_double(r.config.L) << ','
            << (r.status == RunStatus::Completed ? "completed" : "nonconvergence") << ','
            << to_string(r.regime.label) << ',' << opt(ev.l3_event_time) << ','
            << format_double(r.drift.max_abs_drift_l1) << ','
            << format_double(r.drift.max_abs_drift_l2) << ','
            << format_double(r.drift.max_abs_drift_l3) << ','
            << format_double(ev.amplitude_positive) << ',' << format_double(ev.amplitude_negative)
            << ',' << csv_quote(r.status_message) << '\n';
    }
}

std::optional<std::string> RunCsv::comment(std::string_view key) const {
    for (const auto& [k, v] : comments) {
        if (k == key) return v;
    }
    return std::nullopt;
}

RunCsv read_run_csv(std::istream& in) {
    RunCsv csv;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    auto field = [&](std::string_view s) -> std::optional<double> {
        s = trim(s);
        if (s.empty()) return std::nullopt;
        return to_double("line " + std::to_string(line_no), s);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = trim(line);
        if (v.empty()) continue;
        if (v.front() == '#') {
            v.remove_prefix(1);
            const std::size_t eq = v.find('=');
            if (eq != std::string_view::npos) {
                csv.comments.emplace_back(std::string(trim(v.substr(0, eq))),
                                          std::string(trim(v.substr(eq + 1))));
            }
            continue;
        }
        if (!header_seen) {
            if (v != kRunCsvHeader) {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": unexpected run CSV header");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> cols;
        while (true) {
            const std::size_t comma = v.find(',');
            cols.push_back(v.substr(0, comma));
            if (comma == std::string_view::npos) break;
            v.remove_prefix(comma + 1);
        }
        if (cols.size() != 9) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 9 columns");
        }
        ReportRow r;
        r.t = field(cols[0]).value_or(0.0);
        r.invariants = {field(cols[1]).value_or(0.0), field(cols[2]).value_or(0.0),
                        field(cols[3]).value_or(0.0)};
        r.separation = field(cols[4]);
        r.n_extrema = static_cast<std::size_t>(field(cols[5]).value_or(0.0));
        r.env_position = field(cols[6]);
        r.fp_iters_max = static_cast<int>(field(cols[7]).value_or(0.0));
        r.warnings = static_cast<int>(field(cols[8]).value_or(0.0));
        csv.rows.push_back(r);
    }
    if (!header_seen) throw std::runtime_error("run CSV has no column header");
    return csv;
}

void write_exact_csv(std::ostream& out, const ExactSolutionSpec& spec, const PeriodicGrid& grid,
                     std::span<const double> times) {
    spec.validate();
    out << "t,x,u\n";
    for (double t : times) {
        for (std::size_t n = 0; n < grid.size(); ++n) {
            const double x = grid.node(n);
            out << format_double(t) << ',' << format_double(x) << ','
                << format_double(evaluate(spec, x, t)) << '\n';
        }
    }
}

} // namespace mkdv
