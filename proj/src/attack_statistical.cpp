#include "kljn/attack_statistical.hpp"

#include <cmath>

#include "kljn/attack_deterministic.hpp"
#include "kljn/errors.hpp"

namespace kljn {

double ccc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw invalid_argument_error("ccc: length mismatch");
    if (x.size() < 2)
        throw invalid_argument_error("ccc: need at least 2 samples");
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xy += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    if (xx <= 0.0 || yy <= 0.0)
        throw degenerate_input_error("ccc: zero-RMS input");
    return xy / std::sqrt(xx * yy);
}

std::string to_string(WireQuantity q) {
    switch (q) {
        case WireQuantity::U: return "u";
        case WireQuantity::I: return "i";
        case WireQuantity::P: return "p";
    }
    return "?";
}

const std::vector<double>& wire_quantity(const WireRecord& rec,
                                         WireQuantity q) {
    switch (q) {
        case WireQuantity::U: return rec.u_w;
        case WireQuantity::I: return rec.i_w;
        default: return rec.p_w;
    }
}

double CccTable::get(BitSituation s) const {
    switch (s) {
        case BitSituation::HH: return hh;
        case BitSituation::LL: return ll;
        case BitSituation::HL: return hl;
        case BitSituation::LH: return lh;
    }
    return 0.0;
}

void CccTable::set(BitSituation s, double v) {
    switch (s) {
        case BitSituation::HH: hh = v; break;
        case BitSituation::LL: ll = v; break;
        case BitSituation::HL: hl = v; break;
        case BitSituation::LH: lh = v; break;
    }
}

namespace {

BitSituation argmax_situation(const CccTable& table) {
    BitSituation best = situation_order[0];
    double best_v = table.get(best);
    for (BitSituation s : situation_order) {
        double v = table.get(s);
        if (v > best_v) {
            best = s;
            best_v = v;
        }
    }
    return best;
}

} // namespace

std::pair<CccTable, BitSituation> channel_ccc_attack(
    const WireRecord& measured, const std::array<WireRecord, 4>& probes,
    WireQuantity quantity) {
    CccTable table;
    const auto& m = wire_quantity(measured, quantity);
    for (int h = 0; h < 4; ++h)
        table.set(situation_order[h],
                  ccc(m, wire_quantity(probes[h], quantity)));
    return {table, argmax_situation(table)};
}

HypothesisResult source_ccc_attack(const WireRecord& measured,
                                   const NoiseTrace& eve_low,
                                   const NoiseTrace& eve_high, Side side,
                                   double r_l, double r_h) {
    const std::size_t n = measured.u_w.size();
    if (eve_low.samples.size() != n || eve_high.samples.size() != n)
        throw invalid_argument_error("source_ccc_attack: length mismatch");
    const double sign = side == Side::Alice ? 1.0 : -1.0;
    std::vector<double> ustar(n);
    for (std::size_t i = 0; i < n; ++i)
        ustar[i] = measured.u_w[i] + sign * measured.i_w[i] * r_l;
    HypothesisResult res;
    res.side = side;
    res.ccc_low = ccc(ustar, eve_low.samples);
    res.ccc_high = ccc(ustar, eve_high.samples);
    res.chosen_resistor = res.ccc_high > res.ccc_low ? r_h : r_l;
    return res;
}

std::pair<CccTable, BitSituation> unilateral_channel_attack(
    const WireRecord& measured, const NoiseTrace& eve_la,
    const NoiseTrace& eve_ha, WireQuantity quantity, const KljnConfig& config,
    const NoiseTrace& dummy_hb, const NoiseTrace& dummy_lb) {
    std::array<WireRecord, 4> probes;
    for (int h = 0; h < 4; ++h) {
        BitSituation s = situation_order[h];
        bool alice_high =
            s == BitSituation::HH || s == BitSituation::HL;
        bool bob_high = s == BitSituation::HH || s == BitSituation::LH;
        const NoiseTrace& ua = alice_high ? eve_ha : eve_la;
        const NoiseTrace& ub = bob_high ? dummy_hb : dummy_lb;
        probes[h] = solve_wire(ua, ub, alice_high ? config.r_h : config.r_l,
                               bob_high ? config.r_h : config.r_l);
    }
    auto [table, winner] = channel_ccc_attack(measured, probes, quantity);
    bool alice_high =
        winner == BitSituation::HH || winner == BitSituation::HL;
    BitSituation guess = alice_high ? BitSituation::HL : BitSituation::LH;
    return {table, guess};
}

double unilateral_finish(double measured_ms, double known_r,
                         const KljnConfig& config) {
    if (!(measured_ms > 0.0))
        throw classification_error("unilateral_finish: nonpositive mean square");
    double r_p = measured_ms /
                 (4.0 * config.boltzmann * config.t_eff * config.bandwidth);
    if (r_p >= known_r)
        throw classification_error(
            "unilateral_finish: implied counterpart resistance is not positive");
    double r_other = r_p * known_r / (known_r - r_p);
    if (!(r_other > 0.0))
        throw classification_error(
            "unilateral_finish: implied counterpart resistance is not positive");
    double d_l = std::fabs(std::log(r_other) - std::log(config.r_l));
    double d_h = std::fabs(std::log(r_other) - std::log(config.r_h));
    return d_h < d_l ? config.r_h : config.r_l;
}

} // namespace kljn
