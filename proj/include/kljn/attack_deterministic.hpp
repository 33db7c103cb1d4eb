#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"

namespace kljn {

// What the eavesdropper holds going into a deterministic attack.
struct EveKnowledge {
    bool knows_alice = false;
    bool knows_bob = false;
    int resolution_bits = 1; // instrument depth, >= 1
};

// Outcome of one attacked bit exchange.  `correct` is filled by the caller
// (the attack does not know the ground truth).  decision_step is 1-based;
// attacks that need the full statistics window report the window length.
struct AttackOutcome {
    BitSituation guess = BitSituation::HH;
    std::size_t decision_step = 0;
    bool correct = false;
    bool undecided = false;
    std::map<std::string, double> aux;
};

// Quantize a trace to 2^delta_bits uniform levels spanning +/- 4 RMS of the
// input (values outside full scale clamp to the end levels).
NoiseTrace quantize_trace(const NoiseTrace& trace, int delta_bits);

struct OhmsLawResult {
    enum class Verdict { HIGH, LOW, UNDECIDED_WAITING };
    Verdict verdict = Verdict::UNDECIDED_WAITING;
    double guessed_r = 0.0;
    // Relative interquartile spread of R-hat(t) per hypothesis, and the
    // fraction of guarded samples within +/-1% of its median.
    double spread_high = 0.0, spread_low = 0.0;
    double flat_fraction_high = 0.0, flat_fraction_low = 0.0;
};

// Ohm's-law identification of the counterpart resistor: with a candidate
// source trace u_b_hyp, R-hat(t) = (u_w(t) - u_b_hyp(t)) / i_w(t) on samples
// where |i_w| exceeds a small-current guard (1e-6 x RMS(i_w)); the hypothesis
// whose R-hat is flat (relative IQR < 1e-3) wins.  Both flat -> an
// undecided-waiting verdict (noise collision, see waiting_time_prob); neither
// flat -> inconsistent_knowledge_error.
OhmsLawResult ohms_law_identify(const WireRecord& record,
                                const NoiseTrace& u_hb, const NoiseTrace& u_lb,
                                double r_h, double r_l);

// Hypothesis order used everywhere a fixed situation order is needed.
inline constexpr std::array<BitSituation, 4> situation_order = {
    BitSituation::HH, BitSituation::LL, BitSituation::HL, BitSituation::LH};

// One-bit power-flow tracking: eliminates every hypothesis whose power-sign
// sequence disagrees with the measured signs at any step (an exactly zero
// power quantizes to +1).  guess = the unique surviving hypothesis;
// decision_step = first index at which exactly one survives.  aux carries
// "survival_steps_<S>" = how many initial steps hypothesis S stayed
// consistent.  All eliminated -> inconsistent_knowledge_error.
AttackOutcome one_bit_power_attack(
    const std::vector<int>& measured_sign,
    const std::array<std::vector<double>, 4>& hypothetical_powers);

// Process of elimination: U*(t) = u_w(t) + i_w(t)*r for r in {r_l, r_h},
// matched against Alice's candidate traces (exact pointwise comparison at
// full resolution, maximal cross-correlation when delta_bits > 0 quantizes
// everything first); Bob's resistor then follows from the measured BEP
// mean-square level.
AttackOutcome elimination_attack(const WireRecord& record,
                                 const NoiseTrace& u_la,
                                 const NoiseTrace& u_ha, double r_l, double r_h,
                                 const KljnConfig& config, int delta_bits = 0);

// Probability that indistinguishable noise hypotheses persist for n steps at
// instrument resolution delta_bits: (2^-delta)^n.
double waiting_time_prob(int delta_bits, int n_steps);

} // namespace kljn
