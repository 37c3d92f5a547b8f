// mkdv_lab: command-line front end for running, sweeping and checking
// mKdV experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mkdv/experiment.hpp"

namespace fs = std::filesystem;
using namespace mkdv;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void apply_seed(ConfigDocument& doc, std::optional<std::uint64_t> seed) {
    if (!seed) return;
    std::erase_if(doc, [](const ConfigEntry& e) { return canonical_key(e.key) == "seed"; });
    doc.push_back({"seed", std::to_string(*seed), 0});
}

void print_summary(const RunReport& r) {
    const RegimeEvidence& ev = r.regime.evidence;
    std::cout << r.config.name << ": "
              << (r.status == RunStatus::Completed ? "completed" : "nonconvergence") << ", "
              << r.rows.size() << " samples, regime " << to_string(r.regime.label);
    if (ev.l3_event_time) std::cout << ", l3 event at t=" << format_double(*ev.l3_event_time);
    std::cout << ", drift (" << format_double(r.drift.max_abs_drift_l1) << ", "
              << format_double(r.drift.max_abs_drift_l2) << ", "
              << format_double(r.drift.max_abs_drift_l3) << ")\n";
    if (!r.status_message.empty()) std::cout << "  " << r.status_message << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver laboratory for the focusing mKdV equation"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned parallel = 1;

    auto* run = app.add_subcommand("run", "Run one experiment from a config file");
    std::string run_config;
    run->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override the perturbation seed");

    auto* sw = app.add_subcommand("sweep", "Run the Cartesian product of comma-separated values");
    std::string sweep_config;
    sw->add_option("config", sweep_config, "Sweep file")->required()->check(CLI::ExistingFile);
    sw->add_option("--out", out_dir, "Output directory");
    sw->add_option("--parallel", parallel, "Worker threads (0 = all cores)");
    sw->add_option("--seed", seed, "Override the perturbation seed");

    auto* ex = app.add_subcommand("exact", "Sample a closed-form solution on a grid");
    std::string family = "double_pole";
    ExactSolutionSpec spec;
    double ex_L = 40.0;
    std::size_t ex_N = 512;
    std::vector<double> times{0.0};
    std::string ex_out;
    ex->add_option("--family", family, "soliton, breather, double_pole or approx_breather");
    ex->add_option("--alpha", spec.alpha, "Carrier frequency");
    ex->add_option("--beta", spec.beta, "Amplitude parameter");
    ex->add_option("--x-shift", spec.x_shift, "Space translation");
    ex->add_option("--t-shift", spec.t_shift, "Time translation");
    ex->add_option("--L", ex_L, "Domain half-length");
    ex->add_option("--N", ex_N, "Node count");
    ex->add_option("--t", times, "Sample times")->expected(1, -1);
    ex->add_option("--out", ex_out, "Output CSV (default stdout)");

    auto* ci = app.add_subcommand("check-invariants", "Report invariant drift of a run file");
    std::string run_file;
    std::optional<double> threshold;
    ci->add_option("run-output", run_file, "Run CSV")->required()->check(CLI::ExistingFile);
    ci->add_option("--threshold", threshold, "Relative 𝓛₃ jump threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ConfigDocument doc = parse_document(read_file(run_config));
            apply_seed(doc, seed);
            const RunReport report = run_experiment(resolve_config(doc));
            const fs::path path = fs::path(out_dir) / (report.config.name + ".csv");
            auto out = open_output(path);
            write_run_csv(out, report);
            print_summary(report);
            std::cout << "wrote " << path.string() << '\n';
            return report.status == RunStatus::Completed ? 0 : 2;
        }
        if (sw->parsed()) {
            std::vector<ConfigDocument> docs = expand_sweep(parse_document(read_file(sweep_config)));
            for (auto& d : docs) apply_seed(d, seed);
            const std::vector<SweepEntry> entries = sweep_documents(docs, parallel);
            for (std::size_t i = 0; i < entries.size(); ++i) {
                if (!entries[i].report) {
                    std::cout << "run " << i << ": failed: " << entries[i].error << '\n';
                    continue;
                }
                auto out = open_output(fs::path(out_dir) / ("run_" + std::to_string(i) + ".csv"));
                write_run_csv(out, *entries[i].report);
                std::cout << "run " << i << ": ";
                print_summary(*entries[i].report);
            }
            const fs::path summary = fs::path(out_dir) / "sweep_summary.csv";
            auto out = open_output(summary);
            write_sweep_summary(out, entries);
            std::cout << "wrote " << summary.string() << '\n';
            return 0;
        }
        if (ex->parsed()) {
            spec.family = parse_family(family);
            const PeriodicGrid grid = make_grid(ex_L, ex_N);
            if (ex_out.empty()) {
                write_exact_csv(std::cout, spec, grid, times);
            } else {
                auto out = open_output(ex_out);
                write_exact_csv(out, spec, grid, times);
            }
            return 0;
        }
        if (ci->parsed()) {
            std::ifstream in(run_file);
            if (!in) throw std::runtime_error("cannot open '" + run_file + "' for reading");
            const RunCsv csv = read_run_csv(in);
            if (csv.rows.empty()) throw std::runtime_error("'" + run_file + "' has no rows");
            double thr = kDefaultL3JumpThreshold;
            if (threshold) {
                thr = *threshold;
            } else if (auto echoed = csv.comment("diagnostics.l3_jump_threshold")) {
                thr = std::stod(*echoed);
            }
            std::vector<InvariantTriple> series;
            for (const auto& r : csv.rows) series.push_back(r.invariants);
            const DriftReport d = drift_report(series, thr);
            std::cout << "samples: " << csv.rows.size() << '\n'
                      << "max |dL1|: " << format_double(d.max_abs_drift_l1) << '\n'
                      << "max |dL2|: " << format_double(d.max_abs_drift_l2) << '\n'
                      << "max |dL3|: " << format_double(d.max_abs_drift_l3) << '\n'
                      << "l3 event: ";
            if (d.l3_event) {
                std::cout << "t=" << format_double(csv.rows[*d.l3_event].t) << " (row "
                          << *d.l3_event << ")\n";
            } else {
                std::cout << "none\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
