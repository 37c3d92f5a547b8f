#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mkdv/diagnostics.hpp"
#include "mkdv/exact_solutions.hpp"
#include "mkdv/invariants.hpp"
#include "mkdv/stepping.hpp"

namespace mkdv {

enum class SchemeKind { Spectral, Fd1, Fd2 };
std::string_view to_string(SchemeKind k) noexcept;
SchemeKind parse_scheme(std::string_view name);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Spectral;
    double dt = 1e-3;
    double fp_tol = 1e-12;
    int fp_max_iter = 100;
    bool dealias = false;  ///< spectral only
};

struct ExperimentConfig {
    std::string name = "run";
    ExactSolutionSpec solution{SolutionFamily::DoublePole, 0.0, 1.0, 0.0, 0.0};
    double scale = 1.0;  ///< multiplies the initial field; 0 gives the zero field
    double L = 40.0;
    std::size_t N = 512;
    SchemeConfig scheme;
    double T = 50.0;
    std::size_t sample_stride = 100;
    std::optional<double> prominence;  ///< default 0.05 max|u0|
    double l3_jump_threshold = kDefaultL3JumpThreshold;
    double envelope_window = 0.0;      ///< <= 0: 2 pi / alpha, or estimated
    RegimeConfig regime;
    double perturbation_amplitude = 0.0;
    std::uint64_t seed = 0;

    /// Module-level precondition checks; throws ConfigError.
    void validate() const;
};

/// Schema or precondition violation; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key.empty() ? message : key + ": " + message),
          key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// One `key = value` (or `key: value`) entry with its source line.
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};
using ConfigDocument = std::vector<ConfigEntry>;

/// Splits a flat key-value document. Blank lines and `#` comments are
/// ignored; duplicate keys are rejected.
ConfigDocument parse_document(std::string_view text);

/// Canonical dotted key for an accepted key or alias, e.g. "dt" -> "scheme.dt".
/// Throws ConfigError for unknown keys.
std::string canonical_key(std::string_view key);

/// Resolves a document into a validated config with defaults filled in.
ExperimentConfig resolve_config(const ConfigDocument& doc);
ExperimentConfig parse_config(std::string_view text);

/// Cartesian product over comma-separated values; the last varying key
/// changes fastest. Each expanded document is unresolved so that a bad
/// combination fails alone.
std::vector<ConfigDocument> expand_sweep(const ConfigDocument& doc);

/// Every resolved field as canonical `key = value` lines, in schema order.
std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& config);

struct ReportRow {
    double t = 0.0;
    InvariantTriple invariants;
    std::optional<double> separation;
    std::size_t n_extrema = 0;
    std::optional<double> env_position;
    int fp_iters_max = 0;
    int warnings = 0;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    RunStatus status = RunStatus::Completed;
    std::string status_message;
    RegimeLabel regime;
    DriftReport drift;
    std::size_t steps_taken = 0;
    int fp_iters_max = 0;
    std::size_t stability_warnings = 0;
};

/// Initial field: the exact solution at t = 0, scaled, plus seeded uniform
/// noise of the configured amplitude.
FieldState initial_field(const ExperimentConfig& config, const PeriodicGrid& grid);

RunReport run_experiment(const ExperimentConfig& config);

struct SweepEntry {
    std::optional<RunReport> report;
    std::string error;  ///< nonempty when the run failed
};

/// Runs configs on up to `threads` workers; results keep input order and a
/// failing run does not affect the others.
std::vector<SweepEntry> sweep(std::span<const ExperimentConfig> configs, unsigned threads = 1);

/// Same, resolving each document first; resolution errors are isolated too.
std::vector<SweepEntry> sweep_documents(std::span<const ConfigDocument> docs,
                                        unsigned threads = 1);

inline constexpr std::string_view kRunCsvHeader =
    "t,L1,L2,L3,separation,n_extrema,env_position,fp_iters_max_since_last_sample,warnings";

/// Run file: `#` config echo, the column header, one row per sample, then
/// `#` footer lines with status, regime and drift.
void write_run_csv(std::ostream& out, const RunReport& report);

/// One row per entry: id, name, scheme, dt, N, L, status, regime, 𝓛₃ event
/// time and drift triple, error.
void write_sweep_summary(std::ostream& out, std::span<const SweepEntry> entries);

/// Parsed run file: echoed `key = value` comments and the numeric rows.
struct RunCsv {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<ReportRow> rows;
    std::optional<std::string> comment(std::string_view key) const;
};
RunCsv read_run_csv(std::istream& in);

/// Closed-form samples `t,x,u` for each requested time.
void write_exact_csv(std::ostream& out, const ExactSolutionSpec& spec, const PeriodicGrid& grid,
                     std::span<const double> times);

/// Formats a double with round-trip precision.
std::string format_double(double v);

} // namespace mkdv
