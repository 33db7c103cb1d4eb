#pragma once
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"

namespace kljn {

// Cross-correlation coefficient <xy> / (RMS(x) * RMS(y)), no mean
// subtraction (all signals here are zero-mean by construction).
double ccc(const std::vector<double>& x, const std::vector<double>& y);

// Which wire quantity a channel attack correlates.
enum class WireQuantity { U, I, P };
std::string to_string(WireQuantity q);
const std::vector<double>& wire_quantity(const WireRecord& rec, WireQuantity q);

// Per-situation coefficients for one quantity.
struct CccTable {
    double hh = 0.0, ll = 0.0, hl = 0.0, lh = 0.0;
    double get(BitSituation s) const;
    void set(BitSituation s, double v);
};

// Correlate the measured record against four probe records (one per resistor
// hypothesis, simulated from the eavesdropper's possibly mixed noises);
// guess = argmax, ties broken in the fixed order HH < LL < HL < LH.
std::pair<CccTable, BitSituation> channel_ccc_attack(
    const WireRecord& measured, const std::array<WireRecord, 4>& probes,
    WireQuantity quantity);

enum class Side { Alice, Bob };

struct HypothesisResult {
    Side side = Side::Alice;
    double chosen_resistor = 0.0;
    double ccc_low = 0.0;
    double ccc_high = 0.0;
};

// Source-voltage hypothesis test for one party: reconstruct
// U* = u_w + i_w * r_l (Alice) or U* = u_w - i_w * r_l (Bob), correlate
// against the eavesdropper's copies of that party's two generator outputs,
// and choose the resistor whose copy correlates more strongly (tie -> r_l).
HypothesisResult source_ccc_attack(const WireRecord& measured,
                                   const NoiseTrace& eve_low,
                                   const NoiseTrace& eve_high, Side side,
                                   double r_l, double r_h);

// One-sided variant: the eavesdropper holds only Alice's (mixed) noises and
// substitutes Bob with fresh independent dummy noises at each hypothesis'
// level.  The coefficient table is built exactly as in channel_ccc_attack;
// since only Alice's side carries information, the decision identifies
// Alice's resistor (the argmax winner's first letter) and completes the bit
// through the secure pair: Alice low -> LH, Alice high -> HL.
std::pair<CccTable, BitSituation> unilateral_channel_attack(
    const WireRecord& measured, const NoiseTrace& eve_la,
    const NoiseTrace& eve_ha, WireQuantity quantity, const KljnConfig& config,
    const NoiseTrace& dummy_hb, const NoiseTrace& dummy_lb);

// Given one party's resistor, recover the other's from the measured BEP
// mean-square: solve R_P from 4kT R_P bandwidth, invert the parallel
// combination, snap to the nearer of {r_l, r_h} on a log axis.
double unilateral_finish(double measured_ms, double known_r,
                         const KljnConfig& config);

} // namespace kljn
