// kljn_lab: command-line front end for the KLJN key-exchange laboratory.
//
// Subcommands:
//   noise-gen    synthesize band-limited Gaussian noise, report its quality
//   kljn-run     simulate one ideal bit exchange and its wire statistics
//   vmg-derive   derive the dependent noise levels of a four-resistor scheme
//   attack <id>  run a Monte-Carlo eavesdropping experiment
//   sweep        run an attack over a parameter grid
//
// Exit codes: 0 success, 2 validation/usage error, 1 runtime error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "kljn/attack_nonlinearity.hpp"
#include "kljn/errors.hpp"
#include "kljn/experiment.hpp"
#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"
#include "kljn/rng.hpp"
#include "kljn/vmg.hpp"

namespace {

using kljn::ExperimentSpec;
using kljn::format_double;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kljn::invalid_argument_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + out_path);
    out << content;
    if (!out)
        throw std::runtime_error("failed writing output file: " + out_path);
}

// Flags shared by `attack` and `sweep`, bound straight into an
// ExperimentSpec (strings that need parsing are carried separately).
struct SpecCli {
    ExperimentSpec spec;
    std::string scheme_name = "KLJN";
    std::string format_name = "csv";
    std::string config_path;
};

void add_spec_options(CLI::App* sub, SpecCli& c) {
    sub->add_option("--config", c.config_path,
                    "key=value file of these flags (flags override it)");
    sub->add_option("--rh", c.spec.config.r_h, "high resistor, ohms");
    sub->add_option("--rl", c.spec.config.r_l, "low resistor, ohms");
    sub->add_option("--teff", c.spec.config.t_eff,
                    "effective temperature, kelvin");
    sub->add_option("--bandwidth", c.spec.config.bandwidth,
                    "noise bandwidth, Hz");
    sub->add_option("--samples", c.spec.config.samples_per_bep,
                    "samples per bit exchange");
    sub->add_option("--runs", c.spec.runs, "Monte-Carlo runs");
    sub->add_option("--seed", c.spec.master_seed, "master seed");
    sub->add_option("--out", c.spec.output_path,
                    "output file (default: stdout, table only)");
    sub->add_option("--format", c.format_name, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--m", c.spec.m, "eavesdropper mixing ratio M");
    sub->add_option("--delta-bits", c.spec.delta_bits,
                    "instrument resolution bits (det-eliminate)");
    sub->add_option("--b", c.spec.b, "second-order distortion, 1/V");
    sub->add_option("--c", c.spec.c, "third-order distortion, 1/V^2");
    sub->add_option("--gamma", c.spec.gamma,
                    "samples per guess (nonlinearity)");
    sub->add_option("--oversample", c.spec.oversample_factor,
                    "zero-crossing interpolation factor");
    sub->add_option("--rha", c.spec.r_ha, "Alice high resistor, ohms");
    sub->add_option("--rla", c.spec.r_la, "Alice low resistor, ohms");
    sub->add_option("--rhb", c.spec.r_hb, "Bob high resistor, ohms");
    sub->add_option("--rlb", c.spec.r_lb, "Bob low resistor, ohms");
    sub->add_option("--u2la", c.spec.u2_la,
                    "Alice low-level mean square, V^2 (0 = from teff)");
    sub->add_option("--scheme", c.scheme_name,
                    "wire scheme for zero-crossing (KLJN, VMG, FCK1)");
    sub->add_flag("--unilateral", c.spec.unilateral,
                  "stat-channel: tap Alice's side only");
    sub->add_option("--ensemble", c.spec.ensemble_count,
                    "generator ensemble size");
}

// Merge: config file is the base; every flag the user actually passed wins.
ExperimentSpec resolve_spec(CLI::App* sub, const SpecCli& c) {
    ExperimentSpec spec = c.spec;
    spec.scheme = kljn::scheme_from_string(c.scheme_name);
    spec.output_format = kljn::format_from_string(c.format_name);
    if (c.config_path.empty()) return spec;

    ExperimentSpec base = kljn::parse_spec(read_file(c.config_path));
    auto passed = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (passed("--rh")) base.config.r_h = spec.config.r_h;
    if (passed("--rl")) base.config.r_l = spec.config.r_l;
    if (passed("--teff")) base.config.t_eff = spec.config.t_eff;
    if (passed("--bandwidth")) base.config.bandwidth = spec.config.bandwidth;
    if (passed("--samples"))
        base.config.samples_per_bep = spec.config.samples_per_bep;
    if (passed("--runs")) base.runs = spec.runs;
    if (passed("--seed")) base.master_seed = spec.master_seed;
    if (passed("--out")) base.output_path = spec.output_path;
    if (passed("--format")) base.output_format = spec.output_format;
    if (passed("--m")) base.m = spec.m;
    if (passed("--delta-bits")) base.delta_bits = spec.delta_bits;
    if (passed("--b")) base.b = spec.b;
    if (passed("--c")) base.c = spec.c;
    if (passed("--gamma")) base.gamma = spec.gamma;
    if (passed("--oversample"))
        base.oversample_factor = spec.oversample_factor;
    if (passed("--rha")) base.r_ha = spec.r_ha;
    if (passed("--rla")) base.r_la = spec.r_la;
    if (passed("--rhb")) base.r_hb = spec.r_hb;
    if (passed("--rlb")) base.r_lb = spec.r_lb;
    if (passed("--u2la")) base.u2_la = spec.u2_la;
    if (passed("--scheme")) base.scheme = spec.scheme;
    if (passed("--unilateral")) base.unilateral = spec.unilateral;
    if (passed("--ensemble")) base.ensemble_count = spec.ensemble_count;
    if (passed("--m-list")) base.m_list = spec.m_list;
    if (passed("--teff-list")) base.t_eff_list = spec.t_eff_list;
    if (passed("--gamma-list")) base.gamma_list = spec.gamma_list;
    return base;
}

void run_and_emit(const ExperimentSpec& spec) {
    const kljn::MonteCarloReport rep = kljn::run_experiment(spec);
    if (spec.output_path.empty()) {
        std::cout << (spec.output_format == kljn::OutputFormat::Json
                          ? kljn::report_to_json(rep)
                          : kljn::report_to_csv(rep));
        return;
    }
    for (const std::string& path : kljn::write_report(rep, spec.output_path))
        std::cout << "wrote " << path << "\n";
}

int cmd_noise_gen(std::size_t n, double bandwidth, std::uint64_t seed,
                  std::size_t ensemble, std::size_t psd_segments,
                  bool emit_samples, const std::string& out,
                  const std::string& format) {
    const kljn::NoiseTrace trace =
        kljn::gen_gblwn_window(n, bandwidth, seed, ensemble);
    const kljn::NoiseQualityReport q =
        kljn::quality_report(trace, psd_segments);

    if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["bandwidth"] = bandwidth;
        j["seed"] = seed;
        j["ensemble"] = ensemble;
        j["dt"] = trace.dt;
        j["mean"] = q.mean;
        j["std"] = q.std;
        j["skewness"] = q.skewness;
        j["excess_kurtosis"] = q.excess_kurtosis;
        j["lag1_autocorr"] = q.lag1_autocorr;
        nlohmann::ordered_json psd = nlohmann::ordered_json::array();
        for (const auto& [f, s] : q.psd_bins) psd.push_back({f, s});
        j["psd"] = psd;
        if (emit_samples) j["samples"] = trace.samples;
        emit(j.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream csv;
    if (emit_samples) {
        csv << "index,value\n";
        for (std::size_t i = 0; i < trace.samples.size(); ++i)
            csv << i << ',' << format_double(trace.samples[i]) << '\n';
    } else {
        csv << "n,bandwidth,seed,ensemble,mean,std,skewness,excess_kurtosis,"
               "lag1_autocorr\n";
        csv << n << ',' << format_double(bandwidth) << ',' << seed << ','
            << ensemble << ',' << format_double(q.mean) << ','
            << format_double(q.std) << ',' << format_double(q.skewness) << ','
            << format_double(q.excess_kurtosis) << ','
            << format_double(q.lag1_autocorr) << '\n';
    }
    emit(csv.str(), out);
    return 0;
}

int cmd_kljn_run(const kljn::KljnConfig& cfg, const std::string& situation,
                 std::uint64_t seed, std::size_t ensemble,
                 const std::string& out, const std::string& format) {
    kljn::validate(cfg);
    const kljn::BitSituation s = kljn::situation_from_string(situation);
    const double r_a = kljn::alice_resistance(cfg, s);
    const double r_b = kljn::bob_resistance(cfg, s);
    const kljn::NoiseTrace ua = kljn::scale_johnson(
        kljn::gen_gblwn_window(cfg.samples_per_bep, cfg.bandwidth,
                               kljn::derive_seed(seed, 1, "src.alice"),
                               ensemble),
        r_a, cfg.t_eff, cfg.bandwidth);
    const kljn::NoiseTrace ub = kljn::scale_johnson(
        kljn::gen_gblwn_window(cfg.samples_per_bep, cfg.bandwidth,
                               kljn::derive_seed(seed, 2, "src.bob"),
                               ensemble),
        r_b, cfg.t_eff, cfg.bandwidth);
    const kljn::WireRecord rec = kljn::solve_wire(ua, ub, r_a, r_b);

    const double u2 = kljn::mean_square(rec.u_w);
    const double i2 = kljn::mean_square(rec.i_w);
    const double pnet = kljn::net_power(rec);
    const double expected = kljn::expected_mean_square(cfg, s);
    const std::string level = kljn::to_string(kljn::classify_level(u2, cfg));

    if (format == "json") {
        nlohmann::ordered_json j;
        j["situation"] = kljn::to_string(s);
        j["r_alice"] = r_a;
        j["r_bob"] = r_b;
        j["u2_w"] = u2;
        j["i2_w"] = i2;
        j["p_net"] = pnet;
        j["expected_u2_w"] = expected;
        j["level"] = level;
        emit(j.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream csv;
    csv << "situation,r_alice,r_bob,u2_w,i2_w,p_net,expected_u2_w,level\n";
    csv << kljn::to_string(s) << ',' << format_double(r_a) << ','
        << format_double(r_b) << ',' << format_double(u2) << ','
        << format_double(i2) << ',' << format_double(pnet) << ','
        << format_double(expected) << ',' << level << '\n';
    emit(csv.str(), out);
    return 0;
}

int cmd_vmg_derive(const kljn::VmgConfig& vc, bool fck1,
                   const std::string& out, const std::string& format) {
    const kljn::VmgDerived d =
        fck1 ? kljn::fck1_levels(vc) : kljn::vmg_levels(vc);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["rha"] = vc.r_ha;
        j["rla"] = vc.r_la;
        j["rhb"] = vc.r_hb;
        j["rlb"] = vc.r_lb;
        j["u2_la"] = vc.u2_la;
        j["u2_ha"] = d.u2_ha;
        j["u2_hb"] = d.u2_hb;
        j["u2_lb"] = d.u2_lb;
        j["t_la"] = d.t_la;
        j["t_ha"] = d.t_ha;
        j["t_hb"] = d.t_hb;
        j["t_lb"] = d.t_lb;
        emit(j.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream csv;
    csv << "rha,rla,rhb,rlb,u2_la,u2_ha,u2_hb,u2_lb,t_la,t_ha,t_hb,t_lb\n";
    csv << format_double(vc.r_ha) << ',' << format_double(vc.r_la) << ','
        << format_double(vc.r_hb) << ',' << format_double(vc.r_lb) << ','
        << format_double(vc.u2_la) << ',' << format_double(d.u2_ha) << ','
        << format_double(d.u2_hb) << ',' << format_double(d.u2_lb) << ','
        << format_double(d.t_la) << ',' << format_double(d.t_ha) << ','
        << format_double(d.t_hb) << ',' << format_double(d.t_lb) << '\n';
    emit(csv.str(), out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale laboratory for the KLJN secure key exchanger"};
    app.require_subcommand(0, 1);

    // noise-gen
    std::size_t ng_n = 4096, ng_ensemble = 4, ng_segments = 4;
    double ng_bw = 500.0;
    std::uint64_t ng_seed = 1;
    bool ng_emit_samples = false;
    std::string ng_out, ng_format = "csv";
    CLI::App* noise_gen = app.add_subcommand(
        "noise-gen", "synthesize Gaussian band-limited white noise");
    noise_gen->add_option("--samples", ng_n, "trace length");
    noise_gen->add_option("--bandwidth", ng_bw, "bandwidth, Hz");
    noise_gen->add_option("--seed", ng_seed, "seed");
    noise_gen->add_option("--ensemble", ng_ensemble, "ensemble size");
    noise_gen->add_option("--psd-segments", ng_segments,
                          "periodogram segments");
    noise_gen->add_flag("--emit-samples", ng_emit_samples,
                        "emit the raw samples instead of statistics");
    noise_gen->add_option("--out", ng_out, "output file (default: stdout)");
    noise_gen->add_option("--format", ng_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // kljn-run
    kljn::KljnConfig kr_cfg;
    std::string kr_situation = "LH";
    std::uint64_t kr_seed = 1;
    std::size_t kr_ensemble = 4;
    std::string kr_out, kr_format = "csv";
    CLI::App* kljn_run =
        app.add_subcommand("kljn-run", "simulate one ideal bit exchange");
    kljn_run->add_option("--rh", kr_cfg.r_h, "high resistor, ohms");
    kljn_run->add_option("--rl", kr_cfg.r_l, "low resistor, ohms");
    kljn_run->add_option("--teff", kr_cfg.t_eff, "temperature, kelvin");
    kljn_run->add_option("--bandwidth", kr_cfg.bandwidth, "bandwidth, Hz");
    kljn_run->add_option("--samples", kr_cfg.samples_per_bep,
                         "samples per exchange");
    kljn_run->add_option("--situation", kr_situation,
                         "resistor situation (HH, LL, HL, LH)");
    kljn_run->add_option("--seed", kr_seed, "seed");
    kljn_run->add_option("--ensemble", kr_ensemble, "ensemble size");
    kljn_run->add_option("--out", kr_out, "output file (default: stdout)");
    kljn_run->add_option("--format", kr_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // vmg-derive
    kljn::VmgConfig vd_cfg;
    bool vd_fck1 = false;
    std::string vd_out, vd_format = "csv";
    CLI::App* vmg_derive = app.add_subcommand(
        "vmg-derive", "derive four-resistor scheme noise levels");
    vmg_derive->add_option("--rha", vd_cfg.r_ha, "Alice high resistor, ohms")
        ->required();
    vmg_derive->add_option("--rla", vd_cfg.r_la, "Alice low resistor, ohms")
        ->required();
    vmg_derive->add_option("--rhb", vd_cfg.r_hb, "Bob high resistor, ohms")
        ->required();
    vmg_derive->add_option("--rlb", vd_cfg.r_lb, "Bob low resistor, ohms")
        ->required();
    vmg_derive->add_option("--u2la", vd_cfg.u2_la,
                           "Alice low-level mean square, V^2")
        ->required();
    vmg_derive->add_option("--bandwidth", vd_cfg.bandwidth, "bandwidth, Hz");
    vmg_derive->add_flag("--fck1", vd_fck1,
                         "use the zero-power variant's level rules");
    vmg_derive->add_option("--out", vd_out, "output file (default: stdout)");
    vmg_derive->add_option("--format", vd_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // attack
    SpecCli at;
    std::string attack_name;
    CLI::App* attack =
        app.add_subcommand("attack", "run one eavesdropping experiment");
    attack
        ->add_option("id", attack_name,
                     "det-ohm | det-onebit | det-eliminate | stat-channel | "
                     "stat-source | zero-crossing | nonlinearity")
        ->required();
    add_spec_options(attack, at);

    // sweep
    SpecCli sw;
    std::string sweep_attack_name;
    CLI::App* sweep =
        app.add_subcommand("sweep", "run an attack over a parameter grid");
    sweep->add_option("--attack", sweep_attack_name, "attack id")->required();
    add_spec_options(sweep, sw);
    sweep->add_option("--m-list", sw.spec.m_list, "mixing ratios")
        ->delimiter(',');
    sweep->add_option("--teff-list", sw.spec.t_eff_list, "temperatures, K")
        ->delimiter(',');
    sweep
        ->add_option("--gamma-list", sw.spec.gamma_list, "samples per guess")
        ->delimiter(',');

    if (argc <= 1) {
        std::cout << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*noise_gen)
            return cmd_noise_gen(ng_n, ng_bw, ng_seed, ng_ensemble,
                                 ng_segments, ng_emit_samples, ng_out,
                                 ng_format);
        if (*kljn_run)
            return cmd_kljn_run(kr_cfg, kr_situation, kr_seed, kr_ensemble,
                                kr_out, kr_format);
        if (*vmg_derive) {
            kljn::validate(vd_cfg);
            return cmd_vmg_derive(vd_cfg, vd_fck1, vd_out, vd_format);
        }
        if (*attack) {
            ExperimentSpec spec = resolve_spec(attack, at);
            spec.attack = kljn::attack_from_string(attack_name);
            run_and_emit(spec);
            return 0;
        }
        if (*sweep) {
            ExperimentSpec spec = resolve_spec(sweep, sw);
            spec.attack = kljn::attack_from_string(sweep_attack_name);
            run_and_emit(spec);
            return 0;
        }
        std::cout << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
