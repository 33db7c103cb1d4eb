#include "kljn/kljn.hpp"

#include <cmath>

#include "kljn/errors.hpp"
#include "kljn/rng.hpp"

namespace kljn {

bool is_secure(BitSituation s) {
    return s == BitSituation::HL || s == BitSituation::LH;
}

std::string to_string(BitSituation s) {
    switch (s) {
        case BitSituation::HH: return "HH";
        case BitSituation::LL: return "LL";
        case BitSituation::HL: return "HL";
        case BitSituation::LH: return "LH";
    }
    return "??";
}

BitSituation situation_from_string(const std::string& s) {
    if (s == "HH") return BitSituation::HH;
    if (s == "LL") return BitSituation::LL;
    if (s == "HL") return BitSituation::HL;
    if (s == "LH") return BitSituation::LH;
    throw invalid_argument_error("unknown bit situation: " + s);
}

BitSituation make_situation(bool alice_high, bool bob_high) {
    if (alice_high) return bob_high ? BitSituation::HH : BitSituation::HL;
    return bob_high ? BitSituation::LH : BitSituation::LL;
}

void validate(const KljnConfig& config) {
    if (!(config.r_h > config.r_l) || !(config.r_l > 0.0))
        throw invalid_argument_error("KljnConfig: requires r_h > r_l > 0");
    if (!(config.t_eff > 0.0))
        throw invalid_argument_error("KljnConfig: t_eff must be positive");
    if (!(config.bandwidth > 0.0))
        throw invalid_argument_error("KljnConfig: bandwidth must be positive");
    if (config.samples_per_bep < 1)
        throw invalid_argument_error("KljnConfig: samples_per_bep must be >= 1");
}

double alice_resistance(const KljnConfig& config, BitSituation s) {
    return (s == BitSituation::HH || s == BitSituation::HL) ? config.r_h
                                                            : config.r_l;
}

double bob_resistance(const KljnConfig& config, BitSituation s) {
    return (s == BitSituation::HH || s == BitSituation::LH) ? config.r_h
                                                            : config.r_l;
}

double parallel_r(double r_a, double r_b) { return r_a * r_b / (r_a + r_b); }

WireRecord solve_wire(const NoiseTrace& u_a, const NoiseTrace& u_b, double r_a,
                      double r_b) {
    if (u_a.samples.size() != u_b.samples.size())
        throw invalid_argument_error("solve_wire: length mismatch");
    if (u_a.dt != u_b.dt)
        throw invalid_argument_error("solve_wire: dt mismatch");
    if (!(r_a + r_b > 0.0))
        throw invalid_argument_error("solve_wire: r_a + r_b must be positive");
    const std::size_t n = u_a.samples.size();
    WireRecord rec;
    rec.u_w.resize(n);
    rec.i_w.resize(n);
    rec.p_w.resize(n);
    rec.dt = u_a.dt;
    const double inv_rs = 1.0 / (r_a + r_b);
    for (std::size_t i = 0; i < n; ++i) {
        double iw = (u_a.samples[i] - u_b.samples[i]) * inv_rs;
        double uw = iw * r_b + u_b.samples[i];
        rec.i_w[i] = iw;
        rec.u_w[i] = uw;
        rec.p_w[i] = uw * iw;
    }
    return rec;
}

double expected_mean_square(const KljnConfig& config, BitSituation s) {
    double rp = parallel_r(alice_resistance(config, s),
                           bob_resistance(config, s));
    return 4.0 * config.boltzmann * config.t_eff * rp * config.bandwidth;
}

std::string to_string(LevelClass c) {
    switch (c) {
        case LevelClass::HH_LEVEL: return "HH";
        case LevelClass::SECURE: return "SECURE";
        case LevelClass::LL_LEVEL: return "LL";
    }
    return "??";
}

LevelClass classify_level(double measured_ms, const KljnConfig& config) {
    if (measured_ms < 0.0)
        throw invalid_argument_error("classify_level: negative mean square");
    double hh = expected_mean_square(config, BitSituation::HH);
    double sec = expected_mean_square(config, BitSituation::HL);
    double ll = expected_mean_square(config, BitSituation::LL);
    if (measured_ms == 0.0) return LevelClass::LL_LEVEL;
    double lm = std::log(measured_ms);
    double d_hh = std::fabs(lm - std::log(hh));
    double d_sec = std::fabs(lm - std::log(sec));
    double d_ll = std::fabs(lm - std::log(ll));
    // Ties (exact geometric midpoints) resolve toward SECURE.
    if (d_sec <= d_hh && d_sec <= d_ll) return LevelClass::SECURE;
    return d_hh < d_ll ? LevelClass::HH_LEVEL : LevelClass::LL_LEVEL;
}

SpectralPrediction predicted_spectra(const KljnConfig& config, BitSituation s) {
    double r_a = alice_resistance(config, s);
    double r_b = bob_resistance(config, s);
    SpectralPrediction sp;
    sp.r_p = parallel_r(r_a, r_b);
    sp.r_s = r_a + r_b;
    sp.s_u = 4.0 * config.boltzmann * config.t_eff * sp.r_p;
    sp.s_i = 4.0 * config.boltzmann * config.t_eff / sp.r_s;
    return sp;
}

double net_power(const WireRecord& record) {
    if (record.p_w.empty())
        throw invalid_argument_error("net_power: empty record");
    return mean_of(record.p_w);
}

BitSituation secure_situation_from_key(std::uint64_t key) {
    return (mix64(key ^ 0x9e3779b97f4a7c15ull) & 1u) ? BitSituation::HL
                                                     : BitSituation::LH;
}

BitSituation uniform_situation_from_key(std::uint64_t key) {
    constexpr BitSituation order[4] = {BitSituation::HH, BitSituation::LL,
                                       BitSituation::HL, BitSituation::LH};
    return order[mix64(key ^ 0xc2b2ae3d27d4eb4full) & 3u];
}

} // namespace kljn
