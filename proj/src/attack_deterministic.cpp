#include "kljn/attack_deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kljn/attack_statistical.hpp"
#include "kljn/errors.hpp"

namespace kljn {

NoiseTrace quantize_trace(const NoiseTrace& trace, int delta_bits) {
    if (delta_bits < 1)
        throw invalid_argument_error("quantize_trace: delta_bits must be >= 1");
    double rms = rms_of(trace.samples);
    if (rms <= 0.0)
        throw degenerate_input_error("quantize_trace: zero-variance trace");
    const double full_scale = 4.0 * rms;
    const double levels = std::ldexp(1.0, delta_bits); // 2^delta
    const double step = 2.0 * full_scale / levels;
    NoiseTrace out = trace;
    for (double& v : out.samples) {
        double idx = std::floor((v + full_scale) / step);
        idx = std::clamp(idx, 0.0, levels - 1.0);
        v = -full_scale + (idx + 0.5) * step;
    }
    return out;
}

namespace {

struct SpreadStats {
    double spread = 0.0;        // relative interquartile range of R-hat
    double flat_fraction = 0.0; // fraction within +/-1% of the median
    std::size_t n = 0;
};

SpreadStats rhat_spread(const WireRecord& record, const NoiseTrace& u_b_hyp,
                        double guard) {
    std::vector<double> rhat;
    rhat.reserve(record.u_w.size());
    for (std::size_t i = 0; i < record.u_w.size(); ++i) {
        if (std::fabs(record.i_w[i]) < guard) continue;
        rhat.push_back((record.u_w[i] - u_b_hyp.samples[i]) / record.i_w[i]);
    }
    SpreadStats st;
    st.n = rhat.size();
    if (rhat.size() < 4) {
        st.spread = std::numeric_limits<double>::infinity();
        return st;
    }
    std::sort(rhat.begin(), rhat.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(rhat.size() - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(lo);
        std::size_t hi = std::min(lo + 1, rhat.size() - 1);
        return rhat[lo] * (1.0 - frac) + rhat[hi] * frac;
    };
    double median = quantile(0.5);
    double iqr = quantile(0.75) - quantile(0.25);
    st.spread = std::fabs(median) > 0.0
                    ? iqr / std::fabs(median)
                    : std::numeric_limits<double>::infinity();
    std::size_t close = 0;
    for (double r : rhat)
        if (std::fabs(r - median) <= 0.01 * std::fabs(median)) ++close;
    st.flat_fraction = static_cast<double>(close) / static_cast<double>(st.n);
    return st;
}

constexpr double flatness_threshold = 1e-3;

} // namespace

OhmsLawResult ohms_law_identify(const WireRecord& record,
                                const NoiseTrace& u_hb, const NoiseTrace& u_lb,
                                double r_h, double r_l) {
    if (u_hb.samples.size() != record.u_w.size() ||
        u_lb.samples.size() != record.u_w.size())
        throw invalid_argument_error("ohms_law_identify: length mismatch");
    double irms = rms_of(record.i_w);
    if (irms <= 0.0)
        throw degenerate_input_error(
            "ohms_law_identify: wire current is identically zero");
    const double guard = 1e-6 * irms;

    SpreadStats sh = rhat_spread(record, u_hb, guard);
    SpreadStats sl = rhat_spread(record, u_lb, guard);
    OhmsLawResult res;
    res.spread_high = sh.spread;
    res.spread_low = sl.spread;
    res.flat_fraction_high = sh.flat_fraction;
    res.flat_fraction_low = sl.flat_fraction;
    bool flat_h = sh.spread < flatness_threshold;
    bool flat_l = sl.spread < flatness_threshold;
    if (flat_h && flat_l) {
        res.verdict = OhmsLawResult::Verdict::UNDECIDED_WAITING;
        return res;
    }
    if (!flat_h && !flat_l)
        throw inconsistent_knowledge_error(
            "ohms_law_identify: no hypothesis yields a flat resistance");
    res.verdict = flat_h ? OhmsLawResult::Verdict::HIGH
                         : OhmsLawResult::Verdict::LOW;
    res.guessed_r = flat_h ? r_h : r_l;
    return res;
}

AttackOutcome one_bit_power_attack(
    const std::vector<int>& measured_sign,
    const std::array<std::vector<double>, 4>& hypothetical_powers) {
    const std::size_t n = measured_sign.size();
    for (const auto& hp : hypothetical_powers)
        if (hp.size() != n)
            throw invalid_argument_error("one_bit_power_attack: length mismatch");
    if (n == 0)
        throw invalid_argument_error("one_bit_power_attack: empty sequences");

    std::array<bool, 4> alive = {true, true, true, true};
    std::array<std::size_t, 4> survived = {n, n, n, n};
    AttackOutcome out;
    out.decision_step = 0;
    std::size_t alive_count = 4;
    for (std::size_t step = 0; step < n; ++step) {
        for (int h = 0; h < 4; ++h) {
            if (!alive[h]) continue;
            int sign = hypothetical_powers[h][step] >= 0.0 ? 1 : -1;
            if (sign != measured_sign[step]) {
                alive[h] = false;
                survived[h] = step; // consistent for `step` initial steps
                --alive_count;
            }
        }
        if (alive_count == 0)
            throw inconsistent_knowledge_error(
                "one_bit_power_attack: every hypothesis eliminated");
        if (alive_count == 1 && out.decision_step == 0)
            out.decision_step = step + 1;
    }
    for (int h = 0; h < 4; ++h)
        out.aux["survival_steps_" + to_string(situation_order[h])] =
            static_cast<double>(survived[h]);
    if (alive_count == 1) {
        for (int h = 0; h < 4; ++h)
            if (alive[h]) out.guess = situation_order[h];
    } else {
        out.undecided = true;
        out.decision_step = n;
        for (int h = 0; h < 4; ++h)
            if (alive[h]) {
                out.guess = situation_order[h];
                break;
            }
    }
    return out;
}

AttackOutcome elimination_attack(const WireRecord& record,
                                 const NoiseTrace& u_la,
                                 const NoiseTrace& u_ha, double r_l, double r_h,
                                 const KljnConfig& config, int delta_bits) {
    const std::size_t n = record.u_w.size();
    if (u_la.samples.size() != n || u_ha.samples.size() != n)
        throw invalid_argument_error("elimination_attack: length mismatch");
    if (n == 0)
        throw invalid_argument_error("elimination_attack: empty record");

    NoiseTrace ustar_l, ustar_h;
    ustar_l.dt = ustar_h.dt = record.dt;
    ustar_l.samples.resize(n);
    ustar_h.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ustar_l.samples[i] = record.u_w[i] + record.i_w[i] * r_l;
        ustar_h.samples[i] = record.u_w[i] + record.i_w[i] * r_h;
    }

    AttackOutcome out;
    out.decision_step = n; // needs the full statistics window
    bool alice_high = false;
    if (delta_bits <= 0) {
        auto matches = [&](const std::vector<double>& a,
                           const std::vector<double>& b) {
            double scale = rms_of(b);
            if (scale <= 0.0) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (std::fabs(a[i] - b[i]) > 1e-9 * scale) return false;
            return true;
        };
        bool low = matches(ustar_l.samples, u_la.samples);
        bool high = matches(ustar_h.samples, u_ha.samples);
        if (low && high) {
            out.undecided = true; // indistinguishable candidate traces
            out.aux["ccc_low"] = 1.0;
            out.aux["ccc_high"] = 1.0;
            return out;
        }
        if (!low && !high)
            throw inconsistent_knowledge_error(
                "elimination_attack: neither candidate trace matches");
        alice_high = high;
        out.aux["ccc_low"] = ccc(ustar_l.samples, u_la.samples);
        out.aux["ccc_high"] = ccc(ustar_h.samples, u_ha.samples);
    } else {
        NoiseTrace ql = quantize_trace(ustar_l, delta_bits);
        NoiseTrace qh = quantize_trace(ustar_h, delta_bits);
        NoiseTrace ela = quantize_trace(u_la, delta_bits);
        NoiseTrace eha = quantize_trace(u_ha, delta_bits);
        double c_low = ccc(ql.samples, ela.samples);
        double c_high = ccc(qh.samples, eha.samples);
        out.aux["ccc_low"] = c_low;
        out.aux["ccc_high"] = c_high;
        if (c_low == c_high) {
            out.undecided = true;
            return out;
        }
        alice_high = c_high > c_low;
    }

    LevelClass level = classify_level(mean_square(record.u_w), config);
    bool bob_high;
    switch (level) {
        case LevelClass::HH_LEVEL: bob_high = true; break;
        case LevelClass::LL_LEVEL: bob_high = false; break;
        default: bob_high = !alice_high; break; // secure: opposite resistor
    }
    out.guess = make_situation(alice_high, bob_high);
    return out;
}

double waiting_time_prob(int delta_bits, int n_steps) {
    if (delta_bits < 1)
        throw invalid_argument_error("waiting_time_prob: delta_bits must be >= 1");
    if (n_steps < 0)
        throw invalid_argument_error("waiting_time_prob: n_steps must be >= 0");
    return std::ldexp(1.0, -delta_bits * n_steps);
}

} // namespace kljn
