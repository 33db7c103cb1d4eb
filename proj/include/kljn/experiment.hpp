#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kljn/kljn.hpp"
#include "kljn/vmg.hpp"

namespace kljn {

enum class AttackId {
    DetOhm,
    DetOneBit,
    DetEliminate,
    StatChannel,
    StatSource,
    ZeroCrossing,
    Nonlinearity,
};
std::string to_string(AttackId id); // "det-ohm", ..., "nonlinearity"
AttackId attack_from_string(const std::string& s);

enum class Scheme { KLJN, VMG, FCK1 };
std::string to_string(Scheme s); // "KLJN", "VMG", "FCK1"
Scheme scheme_from_string(const std::string& s);

enum class OutputFormat { Csv, Json };
std::string to_string(OutputFormat f); // "csv", "json"
OutputFormat format_from_string(const std::string& s);

// Everything one Monte-Carlo experiment needs; round-trips losslessly
// through the flat key=value text form (serialize_spec/parse_spec).
struct ExperimentSpec {
    AttackId attack = AttackId::StatSource;
    Scheme scheme = Scheme::KLJN;
    KljnConfig config; // r_h, r_l, t_eff, bandwidth, samples_per_bep

    // Four-resistor generalization, used when scheme != KLJN.  u2_la == 0
    // means "derive from config.t_eff at r_la".
    double r_ha = 100e3, r_la = 10e3, r_hb = 10e3, r_lb = 1e3;
    double u2_la = 0.0;

    double m = 0.0;       // eavesdropper mixing ratio M
    int delta_bits = 0;   // instrument resolution (det-eliminate)
    double b = 0.0;       // second-order distortion, 1/V
    double c = 0.0;       // third-order distortion, 1/V^2
    std::size_t gamma = 1000;
    std::size_t oversample_factor = 16;
    bool unilateral = false; // stat-channel: Eve taps only Alice's side

    std::size_t runs = 200;
    std::size_t ensemble_count = 4;
    std::uint64_t master_seed = 1;
    std::string output_path; // empty -> main table to stdout
    OutputFormat output_format = OutputFormat::Csv;

    // Sweep grids; empty list -> the scalar above is the single point.
    std::vector<double> m_list;
    std::vector<double> t_eff_list;
    std::vector<std::size_t> gamma_list;
};

void validate(const ExperimentSpec& spec);

// Flat "key=value" lines mirroring the CLI flags ('#' starts a comment).
// parse_spec(serialize_spec(s)) reproduces s exactly.
std::string serialize_spec(const ExperimentSpec& spec);
ExperimentSpec parse_spec(const std::string& text);

// One table row: ordered parameter columns plus the aggregate statistics.
struct ReportRow {
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t runs = 0;
    double p = 0.0;
    double sigma = 0.0; // across-batch standard deviation, 10 equal batches
    std::map<std::string, double> diagnostics; // JSON only, not in CSV
};

struct RunRow {
    std::size_t run = 0; // 1-based, restarts at each table row's block
    std::string truth;
    std::string guess;
    int correct = 0;
    std::size_t decision_step = 0;
};

struct MonteCarloReport {
    ExperimentSpec spec;
    std::vector<ReportRow> rows;
    std::vector<RunRow> per_run;
    std::map<std::string, double> diagnostics;
};

// Deterministic for a fixed spec: every run r draws all of its randomness
// from streams keyed (master_seed, r), so the report is byte-identical
// regardless of worker count or scheduling.
MonteCarloReport run_experiment(const ExperimentSpec& spec);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

// Main table: header `attack,scheme,<param names>,runs,p,sigma`, one data
// row per table row.  Fields never contain commas or quotes.
std::string report_to_csv(const MonteCarloReport& report);
// Per-run detail: header `run,truth,guess,correct,decision_step`.
std::string runs_to_csv(const MonteCarloReport& report);
// Single document mirroring spec echo, rows (with diagnostics), per-run
// detail, and report diagnostics.
std::string report_to_json(const MonteCarloReport& report);

std::vector<ReportRow> parse_report_csv(const std::string& text);
std::vector<RunRow> parse_runs_csv(const std::string& text);

// csv: writes the main table at `path` plus `<stem>.runs.csv` next to it;
// json: one file at `path`.  Returns the paths written.
std::vector<std::string> write_report(const MonteCarloReport& report,
                                      const std::string& path);

// Run fn(0..n-1) on KLJN_LAB_THREADS workers (default: hardware threads).
// Caller guarantees fn(i) touches only slot i of any shared state.
void parallel_for_runs(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace kljn
