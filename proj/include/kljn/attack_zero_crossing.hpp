#pragma once
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"

namespace kljn {

// Band-limited interpolation to factor x the sample rate via frequency-domain
// zero padding.  factor == 1 returns the input verbatim.  The Nyquist bin is
// split with weight 1/sqrt(2) to each half so the interpolated sequence keeps
// the input's energy exactly (Parseval); in-band content is reproduced
// exactly either way.
NoiseTrace oversample(const NoiseTrace& trace, std::size_t factor);

// Interpolated zero-crossing instants of the wire current and the wire
// voltage sampled at those instants.
struct CrossingSet {
    std::vector<double> times;            // seconds, strictly increasing
    std::vector<double> sampled_voltages; // volts, one per time
};

// Oversample both traces, detect sign changes of the dense current, locate
// each crossing by linear interpolation between the bracketing dense samples,
// and evaluate the voltage there by the same interpolation.  No crossings is
// a valid (empty) result.
CrossingSet find_zero_crossings(const NoiseTrace& i, const NoiseTrace& u,
                                std::size_t factor);

// One simulated bit exchange: the wire record and its ground truth.  The key
// passed in is derived from (seed, phase, run index); the runner derives its
// own per-source streams from it.
using SchemeRunner =
    std::function<std::pair<WireRecord, BitSituation>(std::uint64_t run_key)>;

struct ZcRun {
    BitSituation truth;
    BitSituation guess;
    bool correct = false;
    bool discarded = false;
    double u2_zc = 0.0;
    std::size_t crossings = 0;
};

struct ZcResult {
    double p = 0.0;
    double sigma = 0.0;
    double mean_u2zc_lh = 0.0, mean_u2zc_hl = 0.0; // calibration means
    double mean_u2w_lh = 0.0, mean_u2w_hl = 0.0;
    double mean_crossings = 0.0;
    std::size_t discarded = 0; // calibration + attack runs without crossings
    std::vector<ZcRun> per_run; // attack phase
};

// Calibration phase: `runs` labeled bit exchanges fix the mean
// crossing-sampled voltage mean-square for LH and HL.  Attack phase: `runs`
// fresh exchanges, each guessed as the situation whose calibrated mean is
// nearer (tie -> LH); p over attack runs, sigma as the standard deviation of
// per-batch p across 10 equal batches.  Runs with empty crossing sets are
// discarded and counted.
ZcResult zc_attack(const SchemeRunner& runner, std::size_t runs,
                   std::uint64_t seed, std::size_t factor = 16);

} // namespace kljn
