#include "kljn/attack_nonlinearity.hpp"

#include <cmath>

#include "kljn/errors.hpp"
#include "kljn/rng.hpp"

namespace kljn {

void validate(const DistortionSpec& spec) {
    if (!(spec.a > 0.0))
        throw invalid_argument_error("DistortionSpec: gain a must be > 0");
    if (!std::isfinite(spec.b) || !std::isfinite(spec.c))
        throw invalid_argument_error(
            "DistortionSpec: coefficients must be finite");
}

NoiseTrace apply_distortion(const NoiseTrace& trace,
                            const DistortionSpec& spec) {
    validate(spec);
    NoiseTrace out = trace;
    for (double& u : out.samples)
        u = spec.a * (u + spec.b * u * u + spec.c * u * u * u);
    return out;
}

double total_distortion(const NoiseTrace& trace, const DistortionSpec& spec) {
    validate(spec);
    const double ms = mean_square(trace.samples);
    if (ms == 0.0)
        throw degenerate_input_error("total_distortion: zero-RMS input");
    double acc2 = 0.0, acc3 = 0.0;
    for (double u : trace.samples) {
        const double d2 = spec.b * u * u;
        const double d3 = spec.c * u * u * u;
        acc2 += d2 * d2;
        acc3 += d3 * d3;
    }
    const double n = static_cast<double>(trace.samples.size());
    return std::sqrt(acc2 / n + acc3 / n) / ms;
}

double total_distortion_analytic(const DistortionSpec& spec, double sigma) {
    validate(spec);
    if (!(sigma > 0.0))
        throw invalid_argument_error(
            "total_distortion_analytic: sigma must be > 0");
    const double s2 = sigma * sigma;
    const double m4 = 3.0 * s2 * s2;      // <u^4>
    const double m6 = 15.0 * s2 * s2 * s2; // <u^6>
    return std::sqrt(spec.b * spec.b * m4 + spec.c * spec.c * m6) / s2;
}

PowerSignOutcome power_sign_attack(const WireRecord& record,
                                   std::size_t gamma) {
    if (gamma == 0)
        throw invalid_argument_error("power_sign_attack: gamma must be >= 1");
    if (gamma > record.p_w.size())
        throw invalid_argument_error(
            "power_sign_attack: gamma exceeds record length");
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma; ++i) acc += record.p_w[i];
    const double mean = acc / static_cast<double>(gamma);
    PowerSignOutcome out;
    out.mean_power = mean;
    out.guess = (mean >= 0.0) ? BitSituation::HL : BitSituation::LH;
    return out;
}

WireRecord distorted_exchange(const KljnConfig& config,
                              const DistortionSpec& spec,
                              BitSituation situation, std::uint64_t run_key,
                              std::size_t ensemble_count) {
    validate(config);
    validate(spec);
    if (!is_secure(situation))
        throw invalid_argument_error(
            "distorted_exchange: situation must be HL or LH");
    const double r_a = alice_resistance(config, situation);
    const double r_b = bob_resistance(config, situation);

    NoiseTrace ua = gen_gblwn_window(config.samples_per_bep, config.bandwidth,
                                     derive_seed(run_key, 1, "nl.alice"),
                                     ensemble_count);
    NoiseTrace ub = gen_gblwn_window(config.samples_per_bep, config.bandwidth,
                                     derive_seed(run_key, 2, "nl.bob"),
                                     ensemble_count);
    ua = apply_distortion(
        scale_johnson(ua, r_a, config.t_eff, config.bandwidth), spec);
    ub = apply_distortion(
        scale_johnson(ub, r_b, config.t_eff, config.bandwidth), spec);
    return solve_wire(ua, ub, r_a, r_b);
}

std::vector<SweepPoint> temperature_sweep(
    const KljnConfig& config, const DistortionSpec& spec,
    const std::vector<double>& t_eff_list,
    const std::vector<std::size_t>& gamma_list, std::size_t runs,
    std::uint64_t seed) {
    if (t_eff_list.empty() || gamma_list.empty())
        throw invalid_argument_error(
            "temperature_sweep: temperature and gamma lists must be "
            "nonempty");
    if (runs == 0)
        throw invalid_argument_error("temperature_sweep: runs must be > 0");
    for (std::size_t g : gamma_list)
        if (g == 0 || g > config.samples_per_bep)
            throw invalid_argument_error(
                "temperature_sweep: every gamma must be in [1, "
                "samples_per_bep]");

    std::vector<SweepPoint> out;
    out.reserve(t_eff_list.size() * gamma_list.size());

    for (std::size_t ti = 0; ti < t_eff_list.size(); ++ti) {
        KljnConfig cfg = config;
        cfg.t_eff = t_eff_list[ti];
        validate(cfg);

        // Simulate the runs once per temperature; every gamma is scored on
        // the same records so the trend in gamma is not noise-confounded.
        std::vector<WireRecord> records;
        std::vector<BitSituation> truths;
        records.reserve(runs);
        truths.reserve(runs);
        double u2_acc = 0.0, i2_acc = 0.0;
        std::size_t samp_total = 0;
        for (std::size_t r = 0; r < runs; ++r) {
            const std::uint64_t key = derive_seed(seed, ti * runs + r + 1,
                                                  "nl.sweep");
            const BitSituation truth = secure_situation_from_key(key);
            records.push_back(
                distorted_exchange(cfg, spec, truth, key));
            truths.push_back(truth);
            for (double v : records.back().u_w) u2_acc += v * v;
            for (double v : records.back().i_w) i2_acc += v * v;
            samp_total += records.back().u_w.size();
        }
        const double u_eff = std::sqrt(u2_acc / static_cast<double>(samp_total));
        const double i_eff = std::sqrt(i2_acc / static_cast<double>(samp_total));

        for (std::size_t g : gamma_list) {
            std::vector<int> ok(runs, 0);
            std::size_t correct = 0;
            for (std::size_t r = 0; r < runs; ++r) {
                const auto res = power_sign_attack(records[r], g);
                ok[r] = (res.guess == truths[r]) ? 1 : 0;
                correct += static_cast<std::size_t>(ok[r]);
            }
            SweepPoint pt;
            pt.gamma = g;
            pt.t_eff = cfg.t_eff;
            pt.u_w_eff = u_eff;
            pt.i_w_eff = i_eff;
            pt.p = static_cast<double>(correct) / static_cast<double>(runs);
            pt.epsilon = 1.0 - pt.p;

            const std::size_t batches = 10;
            if (runs >= batches) {
                const std::size_t per = runs / batches;
                std::vector<double> ps;
                ps.reserve(batches);
                for (std::size_t b = 0; b < batches; ++b) {
                    std::size_t hit = 0;
                    for (std::size_t k = b * per; k < (b + 1) * per; ++k)
                        hit += static_cast<std::size_t>(ok[k]);
                    ps.push_back(static_cast<double>(hit) /
                                 static_cast<double>(per));
                }
                const double mu = mean_of(ps);
                double acc = 0.0;
                for (double v : ps) acc += (v - mu) * (v - mu);
                pt.sigma = std::sqrt(acc / static_cast<double>(ps.size()));
            }
            out.push_back(pt);
        }
    }
    return out;
}

} // namespace kljn
