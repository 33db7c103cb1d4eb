#include "kljn/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "kljn/attack_deterministic.hpp"
#include "kljn/attack_nonlinearity.hpp"
#include "kljn/attack_statistical.hpp"
#include "kljn/attack_zero_crossing.hpp"
#include "kljn/errors.hpp"
#include "kljn/rng.hpp"

namespace kljn {

// ---------------------------------------------------------------------------
// Enum names

std::string to_string(AttackId id) {
    switch (id) {
        case AttackId::DetOhm: return "det-ohm";
        case AttackId::DetOneBit: return "det-onebit";
        case AttackId::DetEliminate: return "det-eliminate";
        case AttackId::StatChannel: return "stat-channel";
        case AttackId::StatSource: return "stat-source";
        case AttackId::ZeroCrossing: return "zero-crossing";
        case AttackId::Nonlinearity: return "nonlinearity";
    }
    return "?";
}

AttackId attack_from_string(const std::string& s) {
    for (AttackId id :
         {AttackId::DetOhm, AttackId::DetOneBit, AttackId::DetEliminate,
          AttackId::StatChannel, AttackId::StatSource, AttackId::ZeroCrossing,
          AttackId::Nonlinearity})
        if (s == to_string(id)) return id;
    throw invalid_argument_error("unknown attack id: " + s);
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::KLJN: return "KLJN";
        case Scheme::VMG: return "VMG";
        case Scheme::FCK1: return "FCK1";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    std::string up = s;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    for (Scheme sc : {Scheme::KLJN, Scheme::VMG, Scheme::FCK1})
        if (up == to_string(sc)) return sc;
    throw invalid_argument_error("unknown scheme: " + s);
}

std::string to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw invalid_argument_error("unknown output format: " + s);
}

// ---------------------------------------------------------------------------
// Spec validation and (de)serialization

void validate(const ExperimentSpec& spec) {
    if (spec.runs == 0)
        throw invalid_argument_error("ExperimentSpec: runs must be > 0");
    if (spec.ensemble_count == 0)
        throw invalid_argument_error(
            "ExperimentSpec: ensemble count must be > 0");
    validate(spec.config);
    if (spec.m < 0.0)
        throw invalid_argument_error("ExperimentSpec: m must be >= 0");
    for (double m : spec.m_list)
        if (m < 0.0)
            throw invalid_argument_error(
                "ExperimentSpec: every m in m-list must be >= 0");
    for (double t : spec.t_eff_list)
        if (!(t > 0.0))
            throw invalid_argument_error(
                "ExperimentSpec: every teff in teff-list must be > 0");
    if (spec.delta_bits < 0)
        throw invalid_argument_error(
            "ExperimentSpec: delta-bits must be >= 0");
    if (spec.oversample_factor == 0)
        throw invalid_argument_error("ExperimentSpec: oversample must be >= 1");
    if (!std::isfinite(spec.b) || !std::isfinite(spec.c))
        throw invalid_argument_error(
            "ExperimentSpec: distortion coefficients must be finite");

    if (spec.attack == AttackId::Nonlinearity) {
        auto check_gamma = [&](std::size_t g) {
            if (g == 0 || g > spec.config.samples_per_bep)
                throw invalid_argument_error(
                    "ExperimentSpec: gamma must be in [1, samples]");
        };
        check_gamma(spec.gamma);
        for (std::size_t g : spec.gamma_list) check_gamma(g);
    } else if (!spec.gamma_list.empty() || !spec.t_eff_list.empty()) {
        throw invalid_argument_error(
            "ExperimentSpec: gamma-list/teff-list apply to the nonlinearity "
            "attack only");
    }
    if (!spec.m_list.empty() && spec.attack != AttackId::StatChannel &&
        spec.attack != AttackId::StatSource)
        throw invalid_argument_error(
            "ExperimentSpec: m-list applies to the statistical attacks only");
    if (spec.scheme != Scheme::KLJN && spec.attack != AttackId::ZeroCrossing)
        throw invalid_argument_error(
            "ExperimentSpec: scheme selection applies to the zero-crossing "
            "attack only");
    if (spec.scheme != Scheme::KLJN) {
        if (!(spec.r_ha > 0.0) || !(spec.r_la > 0.0) || !(spec.r_hb > 0.0) ||
            !(spec.r_lb > 0.0))
            throw invalid_argument_error(
                "ExperimentSpec: all four resistors must be > 0");
        if (spec.u2_la < 0.0)
            throw invalid_argument_error(
                "ExperimentSpec: u2la must be >= 0 (0 = derive from teff)");
    }
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw invalid_argument_error("cannot parse " + what + ": '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw invalid_argument_error("cannot parse " + what + ": '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += format_double(v[i]);
    }
    return out;
}

std::string join_counts(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(v[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

std::string serialize_spec(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "attack=" << to_string(spec.attack) << '\n';
    out << "scheme=" << to_string(spec.scheme) << '\n';
    out << "rh=" << format_double(spec.config.r_h) << '\n';
    out << "rl=" << format_double(spec.config.r_l) << '\n';
    out << "teff=" << format_double(spec.config.t_eff) << '\n';
    out << "bandwidth=" << format_double(spec.config.bandwidth) << '\n';
    out << "samples=" << spec.config.samples_per_bep << '\n';
    out << "rha=" << format_double(spec.r_ha) << '\n';
    out << "rla=" << format_double(spec.r_la) << '\n';
    out << "rhb=" << format_double(spec.r_hb) << '\n';
    out << "rlb=" << format_double(spec.r_lb) << '\n';
    out << "u2la=" << format_double(spec.u2_la) << '\n';
    out << "m=" << format_double(spec.m) << '\n';
    out << "delta-bits=" << spec.delta_bits << '\n';
    out << "b=" << format_double(spec.b) << '\n';
    out << "c=" << format_double(spec.c) << '\n';
    out << "gamma=" << spec.gamma << '\n';
    out << "oversample=" << spec.oversample_factor << '\n';
    out << "unilateral=" << (spec.unilateral ? "true" : "false") << '\n';
    out << "runs=" << spec.runs << '\n';
    out << "ensemble=" << spec.ensemble_count << '\n';
    out << "seed=" << spec.master_seed << '\n';
    out << "out=" << spec.output_path << '\n';
    out << "format=" << to_string(spec.output_format) << '\n';
    out << "m-list=" << join_doubles(spec.m_list) << '\n';
    out << "teff-list=" << join_doubles(spec.t_eff_list) << '\n';
    out << "gamma-list=" << join_counts(spec.gamma_list) << '\n';
    return out.str();
}

ExperimentSpec parse_spec(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw invalid_argument_error("config line missing '=': " + line);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key == "attack") {
            spec.attack = attack_from_string(val);
        } else if (key == "scheme") {
            spec.scheme = scheme_from_string(val);
        } else if (key == "rh") {
            spec.config.r_h = parse_double(val, key);
        } else if (key == "rl") {
            spec.config.r_l = parse_double(val, key);
        } else if (key == "teff") {
            spec.config.t_eff = parse_double(val, key);
        } else if (key == "bandwidth") {
            spec.config.bandwidth = parse_double(val, key);
        } else if (key == "samples") {
            spec.config.samples_per_bep =
                static_cast<std::size_t>(parse_u64(val, key));
        } else if (key == "rha") {
            spec.r_ha = parse_double(val, key);
        } else if (key == "rla") {
            spec.r_la = parse_double(val, key);
        } else if (key == "rhb") {
            spec.r_hb = parse_double(val, key);
        } else if (key == "rlb") {
            spec.r_lb = parse_double(val, key);
        } else if (key == "u2la") {
            spec.u2_la = parse_double(val, key);
        } else if (key == "m") {
            spec.m = parse_double(val, key);
        } else if (key == "delta-bits") {
            spec.delta_bits = static_cast<int>(parse_u64(val, key));
        } else if (key == "b") {
            spec.b = parse_double(val, key);
        } else if (key == "c") {
            spec.c = parse_double(val, key);
        } else if (key == "gamma") {
            spec.gamma = static_cast<std::size_t>(parse_u64(val, key));
        } else if (key == "oversample") {
            spec.oversample_factor =
                static_cast<std::size_t>(parse_u64(val, key));
        } else if (key == "unilateral") {
            if (val == "true" || val == "1")
                spec.unilateral = true;
            else if (val == "false" || val == "0")
                spec.unilateral = false;
            else
                throw invalid_argument_error("cannot parse unilateral: " + val);
        } else if (key == "runs") {
            spec.runs = static_cast<std::size_t>(parse_u64(val, key));
        } else if (key == "ensemble") {
            spec.ensemble_count = static_cast<std::size_t>(parse_u64(val, key));
        } else if (key == "seed") {
            spec.master_seed = parse_u64(val, key);
        } else if (key == "out") {
            spec.output_path = val;
        } else if (key == "format") {
            spec.output_format = format_from_string(val);
        } else if (key == "m-list") {
            spec.m_list.clear();
            if (!val.empty())
                for (const std::string& tok : split(val, ','))
                    spec.m_list.push_back(parse_double(trim(tok), key));
        } else if (key == "teff-list") {
            spec.t_eff_list.clear();
            if (!val.empty())
                for (const std::string& tok : split(val, ','))
                    spec.t_eff_list.push_back(parse_double(trim(tok), key));
        } else if (key == "gamma-list") {
            spec.gamma_list.clear();
            if (!val.empty())
                for (const std::string& tok : split(val, ','))
                    spec.gamma_list.push_back(
                        static_cast<std::size_t>(parse_u64(trim(tok), key)));
        } else {
            throw invalid_argument_error("unknown config key: " + key);
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Parallel runner

void parallel_for_runs(std::size_t n,
                       const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers = 0;
    if (const char* env = std::getenv("KLJN_LAB_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end && *end == '\0') workers = static_cast<std::size_t>(parsed);
    }
    if (workers == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw ? hw : 1;
    }
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
                next.store(n); // stop handing out work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared driver helpers

namespace {

double batch_sigma(const std::vector<int>& ok) {
    const std::size_t batches = 10;
    if (ok.size() < batches) return 0.0;
    const std::size_t per = ok.size() / batches;
    std::vector<double> ps(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        std::size_t hits = 0;
        for (std::size_t k = b * per; k < (b + 1) * per; ++k)
            hits += static_cast<std::size_t>(ok[k]);
        ps[b] = static_cast<double>(hits) / static_cast<double>(per);
    }
    const double mu = mean_of(ps);
    double acc = 0.0;
    for (double v : ps) acc += (v - mu) * (v - mu);
    return std::sqrt(acc / static_cast<double>(ps.size()));
}

std::vector<std::pair<std::string, std::string>> base_params(
    const ExperimentSpec& spec) {
    return {{"rh", format_double(spec.config.r_h)},
            {"rl", format_double(spec.config.r_l)},
            {"teff", format_double(spec.config.t_eff)},
            {"bandwidth", format_double(spec.config.bandwidth)},
            {"samples", std::to_string(spec.config.samples_per_bep)}};
}

// The four physical generators of one exchange: every waveform independent,
// each party's idle generator still running (and observable by Eve).
struct SourceBank {
    NoiseTrace u_la, u_ha; // Alice's generator outputs, Johnson-scaled
    NoiseTrace u_lb, u_hb; // Bob's
};

SourceBank make_sources(const ExperimentSpec& spec, std::uint64_t key) {
    const KljnConfig& cfg = spec.config;
    const std::size_t n = cfg.samples_per_bep;
    auto raw = [&](std::uint64_t idx, const char* label) {
        return gen_gblwn_window(n, cfg.bandwidth, derive_seed(key, idx, label),
                                spec.ensemble_count);
    };
    SourceBank bank;
    bank.u_la = scale_johnson(raw(1, "src.L,A"), cfg.r_l, cfg.t_eff,
                              cfg.bandwidth);
    bank.u_ha = scale_johnson(raw(2, "src.H,A"), cfg.r_h, cfg.t_eff,
                              cfg.bandwidth);
    bank.u_lb = scale_johnson(raw(3, "src.L,B"), cfg.r_l, cfg.t_eff,
                              cfg.bandwidth);
    bank.u_hb = scale_johnson(raw(4, "src.H,B"), cfg.r_h, cfg.t_eff,
                              cfg.bandwidth);
    return bank;
}

const NoiseTrace& alice_source(const SourceBank& bank, const KljnConfig& cfg,
                               BitSituation s) {
    return alice_resistance(cfg, s) == cfg.r_h ? bank.u_ha : bank.u_la;
}

const NoiseTrace& bob_source(const SourceBank& bank, const KljnConfig& cfg,
                             BitSituation s) {
    return bob_resistance(cfg, s) == cfg.r_h ? bank.u_hb : bank.u_lb;
}

WireRecord wire_from(const SourceBank& bank, const KljnConfig& cfg,
                     BitSituation s) {
    return solve_wire(alice_source(bank, cfg, s), bob_source(bank, cfg, s),
                      alice_resistance(cfg, s), bob_resistance(cfg, s));
}

void append_run_rows(MonteCarloReport& rep, const std::vector<RunRow>& rows) {
    rep.per_run.insert(rep.per_run.end(), rows.begin(), rows.end());
}

// ---------------------------------------------------------------------------
// det-ohm: Eve knows Bob's generator waveform; Ohm's law identifies Bob's
// resistor from one exchange, the wire mean-square then fixes Alice's.

void drive_det_ohm(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig& cfg = spec.config;
    std::vector<RunRow> rows(spec.runs);
    std::vector<int> ok(spec.runs, 0);
    std::atomic<std::size_t> undecided{0};

    parallel_for_runs(spec.runs, [&](std::size_t r) {
        const std::uint64_t key = derive_seed(spec.master_seed, r + 1, "run");
        const BitSituation truth = uniform_situation_from_key(key);
        const SourceBank bank = make_sources(spec, key);
        const WireRecord rec = wire_from(bank, cfg, truth);

        RunRow row;
        row.run = r + 1;
        row.truth = to_string(truth);
        row.decision_step = cfg.samples_per_bep;
        try {
            const OhmsLawResult res = ohms_law_identify(
                rec, bank.u_hb, bank.u_lb, cfg.r_h, cfg.r_l);
            if (res.verdict == OhmsLawResult::Verdict::UNDECIDED_WAITING) {
                ++undecided;
                row.guess = to_string(BitSituation::HH);
            } else {
                const bool bob_high =
                    res.verdict == OhmsLawResult::Verdict::HIGH;
                const double r_alice = unilateral_finish(
                    mean_square(rec.u_w), res.guessed_r, cfg);
                const BitSituation guess =
                    make_situation(r_alice == cfg.r_h, bob_high);
                row.guess = to_string(guess);
                row.correct = (guess == truth) ? 1 : 0;
            }
        } catch (const classification_error&) {
            ++undecided;
            row.guess = to_string(BitSituation::HH);
        }
        ok[r] = row.correct;
        rows[r] = row;
    });

    ReportRow row;
    row.params = base_params(spec);
    row.runs = spec.runs;
    std::size_t correct = 0;
    for (int v : ok) correct += static_cast<std::size_t>(v);
    row.p = static_cast<double>(correct) / static_cast<double>(spec.runs);
    row.sigma = batch_sigma(ok);
    row.diagnostics["undecided_runs"] = static_cast<double>(undecided.load());
    rep.rows.push_back(row);
    append_run_rows(rep, rows);
}

// ---------------------------------------------------------------------------
// det-onebit: Eve knows all four generator waveforms and tracks the sign of
// the instantaneous power flow, eliminating situations step by step.

void drive_det_onebit(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig& cfg = spec.config;
    std::vector<RunRow> rows(spec.runs);
    std::vector<int> ok(spec.runs, 0);
    std::vector<double> opposing_survival(spec.runs, 0.0);

    parallel_for_runs(spec.runs, [&](std::size_t r) {
        const std::uint64_t key = derive_seed(spec.master_seed, r + 1, "run");
        const BitSituation truth = secure_situation_from_key(key);

        const std::size_t n = cfg.samples_per_bep;
        const SourceBank bank = make_sources(spec, key);
        const WireRecord rec = wire_from(bank, cfg, truth);

        std::vector<int> measured_sign(n);
        for (std::size_t i = 0; i < n; ++i)
            measured_sign[i] = rec.p_w[i] >= 0.0 ? 1 : -1;

        std::array<std::vector<double>, 4> hyp;
        for (std::size_t h = 0; h < 4; ++h)
            hyp[h] = wire_from(bank, cfg, situation_order[h]).p_w;

        RunRow row;
        row.run = r + 1;
        row.truth = to_string(truth);
        try {
            const AttackOutcome out = one_bit_power_attack(measured_sign, hyp);
            row.guess = to_string(out.guess);
            row.decision_step = out.decision_step;
            row.correct = (!out.undecided && out.guess == truth) ? 1 : 0;
            const BitSituation opposing =
                truth == BitSituation::HL ? BitSituation::LH
                                          : BitSituation::HL;
            opposing_survival[r] =
                out.aux.at("survival_steps_" + to_string(opposing));
        } catch (const inconsistent_knowledge_error&) {
            row.guess = to_string(BitSituation::HH);
            row.decision_step = n;
        }
        ok[r] = row.correct;
        rows[r] = row;
    });

    ReportRow row;
    row.params = base_params(spec);
    row.runs = spec.runs;
    std::size_t correct = 0;
    for (int v : ok) correct += static_cast<std::size_t>(v);
    row.p = static_cast<double>(correct) / static_cast<double>(spec.runs);
    row.sigma = batch_sigma(ok);
    for (int nstep = 1; nstep <= 8; ++nstep) {
        std::size_t alive = 0;
        for (double s : opposing_survival)
            if (s >= static_cast<double>(nstep)) ++alive;
        row.diagnostics["survival_ge_" + std::to_string(nstep)] =
            static_cast<double>(alive) / static_cast<double>(spec.runs);
    }
    double step_acc = 0.0;
    for (const RunRow& rr : rows)
        step_acc += static_cast<double>(rr.decision_step);
    row.diagnostics["mean_decision_step"] =
        step_acc / static_cast<double>(spec.runs);
    rep.rows.push_back(row);
    append_run_rows(rep, rows);
}

// ---------------------------------------------------------------------------
// det-eliminate: Eve knows Alice's generator waveform; process of
// elimination against the two scaled candidates, then Bob from the level.

void drive_det_eliminate(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig& cfg = spec.config;
    std::vector<RunRow> rows(spec.runs);
    std::vector<int> ok(spec.runs, 0);
    std::atomic<std::size_t> undecided{0};

    parallel_for_runs(spec.runs, [&](std::size_t r) {
        const std::uint64_t key = derive_seed(spec.master_seed, r + 1, "run");
        const BitSituation truth = uniform_situation_from_key(key);
        const SourceBank bank = make_sources(spec, key);
        const WireRecord rec = wire_from(bank, cfg, truth);

        RunRow row;
        row.run = r + 1;
        row.truth = to_string(truth);
        try {
            const AttackOutcome out =
                elimination_attack(rec, bank.u_la, bank.u_ha, cfg.r_l,
                                   cfg.r_h, cfg, spec.delta_bits);
            row.guess = to_string(out.guess);
            row.decision_step = out.decision_step;
            if (out.undecided)
                ++undecided;
            else
                row.correct = (out.guess == truth) ? 1 : 0;
        } catch (const inconsistent_knowledge_error&) {
            ++undecided;
            row.guess = to_string(BitSituation::HH);
            row.decision_step = cfg.samples_per_bep;
        }
        ok[r] = row.correct;
        rows[r] = row;
    });

    ReportRow row;
    row.params = base_params(spec);
    row.params.emplace_back("delta_bits", std::to_string(spec.delta_bits));
    row.runs = spec.runs;
    std::size_t correct = 0;
    for (int v : ok) correct += static_cast<std::size_t>(v);
    row.p = static_cast<double>(correct) / static_cast<double>(spec.runs);
    row.sigma = batch_sigma(ok);
    row.diagnostics["undecided_runs"] = static_cast<double>(undecided.load());
    if (spec.delta_bits > 0)
        row.diagnostics["expected_waiting_prob_per_step"] =
            waiting_time_prob(spec.delta_bits, 1);
    rep.rows.push_back(row);
    append_run_rows(rep, rows);
}

// ---------------------------------------------------------------------------
// stat-channel: CCC of a measured wire quantity against Eve's four simulated
// probe records.  Bilateral taps both sides; unilateral taps Alice only and
// completes through the secure pair.

struct ChannelRunResult {
    BitSituation truth;
    std::array<BitSituation, 3> guess; // per WireQuantity {U, I, P}
    std::array<CccTable, 3> table;
};

void drive_stat_channel(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig& cfg = spec.config;
    const std::vector<double> ms =
        spec.m_list.empty() ? std::vector<double>{spec.m} : spec.m_list;
    constexpr std::array<WireQuantity, 3> quantities = {
        WireQuantity::U, WireQuantity::I, WireQuantity::P};

    for (double m : ms) {
        std::vector<ChannelRunResult> results(spec.runs);

        parallel_for_runs(spec.runs, [&](std::size_t r) {
            const std::uint64_t key =
                derive_seed(spec.master_seed, r + 1, "run");
            const BitSituation truth = secure_situation_from_key(key);
            const SourceBank bank = make_sources(spec, key);
            const WireRecord rec = wire_from(bank, cfg, truth);

            auto raw = [&](std::uint64_t idx, const char* label) {
                return gen_gblwn_window(cfg.samples_per_bep, cfg.bandwidth,
                                        derive_seed(key, idx, label),
                                        spec.ensemble_count);
            };
            // One additive stream per tapped party, scaled to the level of
            // whichever of that party's generators it contaminates.
            const NoiseTrace add_a = raw(5, "eve.additive.A");
            auto eve_copy = [&](const NoiseTrace& source,
                                const NoiseTrace& add, double r_level) {
                return mix_eve_noise(
                    source,
                    scale_johnson(add, r_level, cfg.t_eff, cfg.bandwidth), m,
                    r_level, cfg.t_eff, cfg.bandwidth);
            };
            const NoiseTrace e_la = eve_copy(bank.u_la, add_a, cfg.r_l);
            const NoiseTrace e_ha = eve_copy(bank.u_ha, add_a, cfg.r_h);

            ChannelRunResult res;
            res.truth = truth;
            if (spec.unilateral) {
                const NoiseTrace dummy_hb =
                    scale_johnson(raw(7, "dummy.H,B"), cfg.r_h, cfg.t_eff,
                                  cfg.bandwidth);
                const NoiseTrace dummy_lb =
                    scale_johnson(raw(8, "dummy.L,B"), cfg.r_l, cfg.t_eff,
                                  cfg.bandwidth);
                for (std::size_t q = 0; q < quantities.size(); ++q) {
                    auto [table, guess] = unilateral_channel_attack(
                        rec, e_la, e_ha, quantities[q], cfg, dummy_hb,
                        dummy_lb);
                    res.table[q] = table;
                    res.guess[q] = guess;
                }
            } else {
                const NoiseTrace add_b = raw(6, "eve.additive.B");
                const NoiseTrace e_lb = eve_copy(bank.u_lb, add_b, cfg.r_l);
                const NoiseTrace e_hb = eve_copy(bank.u_hb, add_b, cfg.r_h);
                std::array<WireRecord, 4> probes;
                for (std::size_t h = 0; h < 4; ++h) {
                    const BitSituation s = situation_order[h];
                    const bool ah = alice_resistance(cfg, s) == cfg.r_h;
                    const bool bh = bob_resistance(cfg, s) == cfg.r_h;
                    probes[h] = solve_wire(ah ? e_ha : e_la, bh ? e_hb : e_lb,
                                           alice_resistance(cfg, s),
                                           bob_resistance(cfg, s));
                }
                for (std::size_t q = 0; q < quantities.size(); ++q) {
                    auto [table, guess] =
                        channel_ccc_attack(rec, probes, quantities[q]);
                    res.table[q] = table;
                    res.guess[q] = guess;
                }
            }
            results[r] = res;
        });

        for (std::size_t q = 0; q < quantities.size(); ++q) {
            std::vector<RunRow> rows(spec.runs);
            std::vector<int> ok(spec.runs, 0);
            CccTable mean_table;
            for (std::size_t r = 0; r < spec.runs; ++r) {
                const ChannelRunResult& res = results[r];
                RunRow row;
                row.run = r + 1;
                row.truth = to_string(res.truth);
                row.guess = to_string(res.guess[q]);
                row.correct = (res.guess[q] == res.truth) ? 1 : 0;
                row.decision_step = cfg.samples_per_bep;
                ok[r] = row.correct;
                rows[r] = row;
                for (BitSituation s : situation_order)
                    mean_table.set(s, mean_table.get(s) + res.table[q].get(s));
            }
            ReportRow row;
            row.params = base_params(spec);
            row.params.emplace_back("m", format_double(m));
            row.params.emplace_back("quantity", to_string(quantities[q]));
            row.params.emplace_back("unilateral",
                                    spec.unilateral ? "true" : "false");
            row.runs = spec.runs;
            std::size_t correct = 0;
            for (int v : ok) correct += static_cast<std::size_t>(v);
            row.p =
                static_cast<double>(correct) / static_cast<double>(spec.runs);
            row.sigma = batch_sigma(ok);
            for (BitSituation s : situation_order)
                row.diagnostics["mean_ccc_" + to_string(s)] =
                    mean_table.get(s) / static_cast<double>(spec.runs);
            rep.rows.push_back(row);
            append_run_rows(rep, rows);
        }
    }
}

// ---------------------------------------------------------------------------
// stat-source: hypothesis test per party on the reconstructed source
// voltage, with Eve holding partially correlated copies of all four
// generator waveforms.

struct SourceRunResult {
    BitSituation truth;
    BitSituation guess;
    double ccc_la_low = 0.0;  // matched CCC when Alice actually holds R_L
    double ccc_la_high = 0.0; // matched CCC when Alice actually holds R_H
    bool alice_low = false;
};

void drive_stat_source(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig& cfg = spec.config;
    const std::vector<double> ms =
        spec.m_list.empty() ? std::vector<double>{spec.m} : spec.m_list;

    for (double m : ms) {
        std::vector<SourceRunResult> results(spec.runs);

        parallel_for_runs(spec.runs, [&](std::size_t r) {
            const std::uint64_t key =
                derive_seed(spec.master_seed, r + 1, "run");
            const BitSituation truth = secure_situation_from_key(key);
            const SourceBank bank = make_sources(spec, key);
            const WireRecord rec = wire_from(bank, cfg, truth);
            const bool alice_high = alice_resistance(cfg, truth) == cfg.r_h;

            auto raw = [&](std::uint64_t idx, const char* label) {
                return gen_gblwn_window(cfg.samples_per_bep, cfg.bandwidth,
                                        derive_seed(key, idx, label),
                                        spec.ensemble_count);
            };
            // Each copy is contaminated by its own independent additive
            // stream: the hypothesis test compares two copies of the same
            // party, so a shared stream would cancel out of the comparison
            // and overstate Eve.
            auto eve_copy = [&](const NoiseTrace& source, std::uint64_t idx,
                                const char* label, double r_level) {
                return mix_eve_noise(
                    source,
                    scale_johnson(raw(idx, label), r_level, cfg.t_eff,
                                  cfg.bandwidth),
                    m, r_level, cfg.t_eff, cfg.bandwidth);
            };
            const NoiseTrace e_la =
                eve_copy(bank.u_la, 5, "eve.additive.L,A", cfg.r_l);
            const NoiseTrace e_ha =
                eve_copy(bank.u_ha, 6, "eve.additive.H,A", cfg.r_h);
            const NoiseTrace e_lb =
                eve_copy(bank.u_lb, 7, "eve.additive.L,B", cfg.r_l);
            const NoiseTrace e_hb =
                eve_copy(bank.u_hb, 8, "eve.additive.H,B", cfg.r_h);

            const HypothesisResult res_a = source_ccc_attack(
                rec, e_la, e_ha, Side::Alice, cfg.r_l, cfg.r_h);
            const HypothesisResult res_b = source_ccc_attack(
                rec, e_lb, e_hb, Side::Bob, cfg.r_l, cfg.r_h);

            SourceRunResult res;
            res.truth = truth;
            res.guess = make_situation(res_a.chosen_resistor == cfg.r_h,
                                       res_b.chosen_resistor == cfg.r_h);
            res.alice_low = !alice_high;
            res.ccc_la_low = res_a.ccc_low;
            res.ccc_la_high = res_a.ccc_high;
            results[r] = res;
        });

        std::vector<RunRow> rows(spec.runs);
        std::vector<int> ok(spec.runs, 0);
        double acc_low = 0.0, acc_low_sq = 0.0, acc_high = 0.0;
        std::size_t n_low = 0, n_high = 0;
        for (std::size_t r = 0; r < spec.runs; ++r) {
            const SourceRunResult& res = results[r];
            RunRow row;
            row.run = r + 1;
            row.truth = to_string(res.truth);
            row.guess = to_string(res.guess);
            row.correct = (res.guess == res.truth) ? 1 : 0;
            row.decision_step = cfg.samples_per_bep;
            ok[r] = row.correct;
            rows[r] = row;
            if (res.alice_low) {
                acc_low += res.ccc_la_low;
                acc_low_sq += res.ccc_la_low * res.ccc_la_low;
                ++n_low;
            } else {
                acc_high += res.ccc_la_high;
                ++n_high;
            }
        }
        ReportRow row;
        row.params = base_params(spec);
        row.params.emplace_back("m", format_double(m));
        row.runs = spec.runs;
        std::size_t correct = 0;
        for (int v : ok) correct += static_cast<std::size_t>(v);
        row.p = static_cast<double>(correct) / static_cast<double>(spec.runs);
        row.sigma = batch_sigma(ok);
        if (n_low > 0) {
            const double mean = acc_low / static_cast<double>(n_low);
            row.diagnostics["mean_ccc_la_low"] = mean;
            row.diagnostics["n_ccc_la_low"] = static_cast<double>(n_low);
            const double var =
                acc_low_sq / static_cast<double>(n_low) - mean * mean;
            row.diagnostics["sd_ccc_la_low"] =
                std::sqrt(std::max(0.0, var));
        }
        if (n_high > 0)
            row.diagnostics["mean_ccc_ha_high"] =
                acc_high / static_cast<double>(n_high);
        rep.rows.push_back(row);
        append_run_rows(rep, rows);
    }
}

// ---------------------------------------------------------------------------
// zero-crossing: calibrated classifier on the mean-square wire voltage
// sampled at the interpolated zeros of the wire current.

void drive_zero_crossing(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const KljnConfig cfg = spec.config;
    SchemeRunner runner;
    std::vector<std::pair<std::string, std::string>> params;

    if (spec.scheme == Scheme::KLJN) {
        const std::size_t ens = spec.ensemble_count;
        runner = [cfg, ens](std::uint64_t key) {
            const BitSituation truth = secure_situation_from_key(key);
            const NoiseTrace raw_a = gen_gblwn_window(
                cfg.samples_per_bep, cfg.bandwidth,
                derive_seed(key, 1, "src.alice"), ens);
            const NoiseTrace raw_b = gen_gblwn_window(
                cfg.samples_per_bep, cfg.bandwidth,
                derive_seed(key, 2, "src.bob"), ens);
            const double r_a = alice_resistance(cfg, truth);
            const double r_b = bob_resistance(cfg, truth);
            const WireRecord rec = solve_wire(
                scale_johnson(raw_a, r_a, cfg.t_eff, cfg.bandwidth),
                scale_johnson(raw_b, r_b, cfg.t_eff, cfg.bandwidth), r_a, r_b);
            return std::make_pair(rec, truth);
        };
        params = base_params(spec);
        params.emplace_back("oversample",
                            std::to_string(spec.oversample_factor));
    } else {
        VmgConfig vc;
        vc.r_ha = spec.r_ha;
        vc.r_la = spec.r_la;
        vc.r_hb = spec.r_hb;
        vc.r_lb = spec.r_lb;
        vc.bandwidth = cfg.bandwidth;
        vc.u2_la = spec.u2_la > 0.0
                       ? spec.u2_la
                       : 4.0 * cfg.boltzmann * cfg.t_eff * vc.r_la *
                             cfg.bandwidth;
        const VmgDerived lev =
            spec.scheme == Scheme::VMG ? vmg_levels(vc) : fck1_levels(vc);

        const std::size_t ens = spec.ensemble_count;
        const std::size_t n = cfg.samples_per_bep;
        runner = [vc, lev, ens, n](std::uint64_t key) {
            const BitSituation truth = secure_situation_from_key(key);
            const bool alice_high = truth == BitSituation::HL;
            const double r_a = alice_high ? vc.r_ha : vc.r_la;
            const double r_b = alice_high ? vc.r_lb : vc.r_hb;
            const double u2_a = alice_high ? lev.u2_ha : vc.u2_la;
            const double u2_b = alice_high ? lev.u2_lb : lev.u2_hb;
            const NoiseTrace raw_a =
                gen_gblwn_window(n, vc.bandwidth,
                                 derive_seed(key, 1, "src.alice"), ens);
            const NoiseTrace raw_b = gen_gblwn_window(
                n, vc.bandwidth, derive_seed(key, 2, "src.bob"), ens);
            const WireRecord rec =
                solve_wire(scale_to_rms(raw_a, std::sqrt(u2_a)),
                           scale_to_rms(raw_b, std::sqrt(u2_b)), r_a, r_b);
            return std::make_pair(rec, truth);
        };
        params = {{"rha", format_double(vc.r_ha)},
                  {"rla", format_double(vc.r_la)},
                  {"rhb", format_double(vc.r_hb)},
                  {"rlb", format_double(vc.r_lb)},
                  {"u2la", format_double(vc.u2_la)},
                  {"bandwidth", format_double(vc.bandwidth)},
                  {"samples", std::to_string(n)},
                  {"oversample", std::to_string(spec.oversample_factor)}};
    }

    const ZcResult res = zc_attack(runner, spec.runs, spec.master_seed,
                                   spec.oversample_factor);

    std::vector<RunRow> rows;
    rows.reserve(res.per_run.size());
    for (std::size_t r = 0; r < res.per_run.size(); ++r) {
        const ZcRun& zr = res.per_run[r];
        RunRow row;
        row.run = r + 1;
        row.truth = to_string(zr.truth);
        row.guess = to_string(zr.guess);
        row.correct = zr.correct ? 1 : 0;
        row.decision_step = zr.discarded ? 0 : cfg.samples_per_bep;
        rows.push_back(row);
    }

    ReportRow row;
    row.params = std::move(params);
    row.runs = spec.runs;
    row.p = res.p;
    row.sigma = res.sigma;
    row.diagnostics["mean_u2zc_lh"] = res.mean_u2zc_lh;
    row.diagnostics["mean_u2zc_hl"] = res.mean_u2zc_hl;
    row.diagnostics["mean_u2w_lh"] = res.mean_u2w_lh;
    row.diagnostics["mean_u2w_hl"] = res.mean_u2w_hl;
    if (res.mean_u2w_lh > 0.0)
        row.diagnostics["ratio_lh"] = res.mean_u2zc_lh / res.mean_u2w_lh;
    if (res.mean_u2w_hl > 0.0)
        row.diagnostics["ratio_hl"] = res.mean_u2zc_hl / res.mean_u2w_hl;
    row.diagnostics["mean_crossings"] = res.mean_crossings;
    row.diagnostics["discarded_runs"] = static_cast<double>(res.discarded);
    rep.rows.push_back(row);
    append_run_rows(rep, rows);
}

// ---------------------------------------------------------------------------
// nonlinearity: power-sign attack on distorted exchanges over a (T, gamma)
// grid; per-T records are shared across gammas (prefix averages).

void drive_nonlinearity(const ExperimentSpec& spec, MonteCarloReport& rep) {
    const DistortionSpec dist{1.0, spec.b, spec.c};
    const std::vector<double> ts = spec.t_eff_list.empty()
                                       ? std::vector<double>{spec.config.t_eff}
                                       : spec.t_eff_list;
    const std::vector<std::size_t> gs =
        spec.gamma_list.empty() ? std::vector<std::size_t>{spec.gamma}
                                : spec.gamma_list;

    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        KljnConfig cfg = spec.config;
        cfg.t_eff = ts[ti];

        std::vector<WireRecord> records(spec.runs);
        std::vector<BitSituation> truths(spec.runs);
        parallel_for_runs(spec.runs, [&](std::size_t r) {
            const std::uint64_t key = derive_seed(
                spec.master_seed, ti * spec.runs + r + 1, "nl.sweep");
            const BitSituation truth = secure_situation_from_key(key);
            truths[r] = truth;
            records[r] = distorted_exchange(cfg, dist, truth, key,
                                            spec.ensemble_count);
        });

        double u2_acc = 0.0, i2_acc = 0.0;
        std::size_t samp_total = 0;
        for (const WireRecord& rec : records) {
            for (double v : rec.u_w) u2_acc += v * v;
            for (double v : rec.i_w) i2_acc += v * v;
            samp_total += rec.u_w.size();
        }
        const double u_eff =
            std::sqrt(u2_acc / static_cast<double>(samp_total));
        const double i_eff =
            std::sqrt(i2_acc / static_cast<double>(samp_total));

        for (std::size_t g : gs) {
            std::vector<RunRow> rows(spec.runs);
            std::vector<int> ok(spec.runs, 0);
            for (std::size_t r = 0; r < spec.runs; ++r) {
                const PowerSignOutcome out = power_sign_attack(records[r], g);
                RunRow row;
                row.run = r + 1;
                row.truth = to_string(truths[r]);
                row.guess = to_string(out.guess);
                row.correct = (out.guess == truths[r]) ? 1 : 0;
                row.decision_step = g;
                ok[r] = row.correct;
                rows[r] = row;
            }
            ReportRow row;
            row.params = {{"rh", format_double(cfg.r_h)},
                          {"rl", format_double(cfg.r_l)},
                          {"bandwidth", format_double(cfg.bandwidth)},
                          {"samples", std::to_string(cfg.samples_per_bep)},
                          {"b", format_double(spec.b)},
                          {"c", format_double(spec.c)},
                          {"teff", format_double(cfg.t_eff)},
                          {"gamma", std::to_string(g)}};
            row.runs = spec.runs;
            std::size_t correct = 0;
            for (int v : ok) correct += static_cast<std::size_t>(v);
            row.p =
                static_cast<double>(correct) / static_cast<double>(spec.runs);
            row.sigma = batch_sigma(ok);
            row.diagnostics["u_w_eff"] = u_eff;
            row.diagnostics["i_w_eff"] = i_eff;
            row.diagnostics["epsilon"] = 1.0 - row.p;
            rep.rows.push_back(row);
            append_run_rows(rep, rows);
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------

MonteCarloReport run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    MonteCarloReport rep;
    rep.spec = spec;
    switch (spec.attack) {
        case AttackId::DetOhm: drive_det_ohm(spec, rep); break;
        case AttackId::DetOneBit: drive_det_onebit(spec, rep); break;
        case AttackId::DetEliminate: drive_det_eliminate(spec, rep); break;
        case AttackId::StatChannel: drive_stat_channel(spec, rep); break;
        case AttackId::StatSource: drive_stat_source(spec, rep); break;
        case AttackId::ZeroCrossing: drive_zero_crossing(spec, rep); break;
        case AttackId::Nonlinearity: drive_nonlinearity(spec, rep); break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Emission

std::string report_to_csv(const MonteCarloReport& report) {
    std::ostringstream out;
    out << "attack,scheme";
    if (!report.rows.empty())
        for (const auto& kv : report.rows.front().params)
            out << ',' << kv.first;
    out << ",runs,p,sigma\n";
    for (const ReportRow& row : report.rows) {
        out << to_string(report.spec.attack) << ','
            << to_string(report.spec.scheme);
        for (const auto& kv : row.params) out << ',' << kv.second;
        out << ',' << row.runs << ',' << format_double(row.p) << ','
            << format_double(row.sigma) << '\n';
    }
    return out.str();
}

std::string runs_to_csv(const MonteCarloReport& report) {
    std::ostringstream out;
    out << "run,truth,guess,correct,decision_step\n";
    for (const RunRow& row : report.per_run)
        out << row.run << ',' << row.truth << ',' << row.guess << ','
            << row.correct << ',' << row.decision_step << '\n';
    return out.str();
}

std::string report_to_json(const MonteCarloReport& report) {
    nlohmann::ordered_json j;
    const ExperimentSpec& s = report.spec;
    nlohmann::ordered_json spec_j;
    spec_j["attack"] = to_string(s.attack);
    spec_j["scheme"] = to_string(s.scheme);
    spec_j["rh"] = s.config.r_h;
    spec_j["rl"] = s.config.r_l;
    spec_j["teff"] = s.config.t_eff;
    spec_j["bandwidth"] = s.config.bandwidth;
    spec_j["samples"] = s.config.samples_per_bep;
    spec_j["rha"] = s.r_ha;
    spec_j["rla"] = s.r_la;
    spec_j["rhb"] = s.r_hb;
    spec_j["rlb"] = s.r_lb;
    spec_j["u2la"] = s.u2_la;
    spec_j["m"] = s.m;
    spec_j["delta_bits"] = s.delta_bits;
    spec_j["b"] = s.b;
    spec_j["c"] = s.c;
    spec_j["gamma"] = s.gamma;
    spec_j["oversample"] = s.oversample_factor;
    spec_j["unilateral"] = s.unilateral;
    spec_j["runs"] = s.runs;
    spec_j["ensemble"] = s.ensemble_count;
    spec_j["seed"] = s.master_seed;
    spec_j["out"] = s.output_path;
    spec_j["format"] = to_string(s.output_format);
    spec_j["m_list"] = s.m_list;
    spec_j["teff_list"] = s.t_eff_list;
    spec_j["gamma_list"] = s.gamma_list;
    j["spec"] = spec_j;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ReportRow& row : report.rows) {
        nlohmann::ordered_json rj;
        nlohmann::ordered_json pj;
        for (const auto& kv : row.params) pj[kv.first] = kv.second;
        rj["params"] = pj;
        rj["runs"] = row.runs;
        rj["p"] = row.p;
        rj["sigma"] = row.sigma;
        rj["diagnostics"] = row.diagnostics;
        rows.push_back(rj);
    }
    j["rows"] = rows;

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const RunRow& row : report.per_run) {
        nlohmann::ordered_json rj;
        rj["run"] = row.run;
        rj["truth"] = row.truth;
        rj["guess"] = row.guess;
        rj["correct"] = row.correct != 0;
        rj["decision_step"] = row.decision_step;
        runs.push_back(rj);
    }
    j["per_run"] = runs;
    j["diagnostics"] = report.diagnostics;
    return j.dump(2) + "\n";
}

std::vector<ReportRow> parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw invalid_argument_error("empty report CSV");
    const std::vector<std::string> header = split(trim(line), ',');
    if (header.size() < 5 || header[0] != "attack" || header[1] != "scheme" ||
        header[header.size() - 3] != "runs" ||
        header[header.size() - 2] != "p" || header.back() != "sigma")
        throw invalid_argument_error("malformed report CSV header");

    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> cells = split(stripped, ',');
        if (cells.size() != header.size())
            throw invalid_argument_error("report CSV row width mismatch");
        ReportRow row;
        for (std::size_t i = 0; i < header.size() - 3; ++i)
            row.params.emplace_back(header[i], cells[i]);
        row.runs = static_cast<std::size_t>(
            parse_u64(cells[header.size() - 3], "runs"));
        row.p = parse_double(cells[header.size() - 2], "p");
        row.sigma = parse_double(cells.back(), "sigma");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RunRow> parse_runs_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw invalid_argument_error("empty runs CSV");
    if (trim(line) != "run,truth,guess,correct,decision_step")
        throw invalid_argument_error("malformed runs CSV header");
    std::vector<RunRow> rows;
    while (std::getline(in, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> cells = split(stripped, ',');
        if (cells.size() != 5)
            throw invalid_argument_error("runs CSV row width mismatch");
        RunRow row;
        row.run = static_cast<std::size_t>(parse_u64(cells[0], "run"));
        row.truth = cells[1];
        row.guess = cells[2];
        row.correct = static_cast<int>(parse_u64(cells[3], "correct"));
        row.decision_step =
            static_cast<std::size_t>(parse_u64(cells[4], "decision_step"));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> write_report(const MonteCarloReport& report,
                                      const std::string& path) {
    if (path.empty())
        throw invalid_argument_error("write_report: empty output path");
    std::vector<std::string> written;
    auto write_file = [&](const std::string& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file: " + p);
        out << content;
        if (!out)
            throw std::runtime_error("failed writing output file: " + p);
        written.push_back(p);
    };
    if (report.spec.output_format == OutputFormat::Json) {
        write_file(path, report_to_json(report));
    } else {
        write_file(path, report_to_csv(report));
        const std::size_t dot = path.find_last_of('.');
        const std::size_t sep = path.find_last_of("/\\");
        const bool has_ext =
            dot != std::string::npos && (sep == std::string::npos || dot > sep);
        const std::string stem = has_ext ? path.substr(0, dot) : path;
        write_file(stem + ".runs.csv", runs_to_csv(report));
    }
    return written;
}

} // namespace kljn
