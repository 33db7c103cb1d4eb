#pragma once
#include <cstdint>
#include <vector>

#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"

namespace kljn {

// Memoryless polynomial generator distortion u* = a*(u + b*u^2 + c*u^3).
struct DistortionSpec {
    double a = 1.0; // linear gain, dimensionless
    double b = 0.0; // second-order coefficient, 1/volt
    double c = 0.0; // third-order coefficient, 1/volt^2
};

void validate(const DistortionSpec& spec);

// Pointwise a*(u + b*u^2 + c*u^3); no renormalization — the distortion
// changes the RMS by design.
NoiseTrace apply_distortion(const NoiseTrace& trace,
                            const DistortionSpec& spec);

// Total distortion sqrt(<(b*u^2)^2> + <(c*u^3)^2>) / <u^2>, evaluated on the
// undistorted input.  The gain a plays no role (it is applied outside the
// bracket).
double total_distortion(const NoiseTrace& trace, const DistortionSpec& spec);

// Same quantity from Gaussian moments: sqrt(3 b^2 s^4 + 15 c^2 s^6) / s^2
// for a zero-mean Gaussian with standard deviation s.
double total_distortion_analytic(const DistortionSpec& spec, double sigma);

struct PowerSignOutcome {
    BitSituation guess; // HL or LH
    double mean_power;  // watts, over the first gamma samples
};

// Average p_w over the first gamma samples: positive -> HL, negative -> LH,
// exact zero -> HL (tie-break).
PowerSignOutcome power_sign_attack(const WireRecord& record,
                                   std::size_t gamma);

// One secure-situation bit exchange with both parties' Johnson-scaled
// generators passed through the same distortion before the wire is solved.
WireRecord distorted_exchange(const KljnConfig& config,
                              const DistortionSpec& spec,
                              BitSituation situation, std::uint64_t run_key,
                              std::size_t ensemble_count = 4);

struct SweepPoint {
    std::size_t gamma = 0; // samples per guess
    double t_eff = 0.0;    // kelvin
    double u_w_eff = 0.0;  // volts, pooled wire-voltage RMS at this T
    double i_w_eff = 0.0;  // amperes, pooled wire-current RMS at this T
    double p = 0.0;        // success probability
    double epsilon = 0.0;  // 1 - p
    double sigma = 0.0;    // across-batch scatter of p
};

// For each effective temperature, simulate `runs` secure exchanges once and
// score every gamma in gamma_list on the same records (prefix averages), so
// the p(gamma) trend is evaluated on common noise.  Output is ordered by
// t_eff_list major, gamma_list minor.
std::vector<SweepPoint> temperature_sweep(const KljnConfig& config,
                                          const DistortionSpec& spec,
                                          const std::vector<double>& t_eff_list,
                                          const std::vector<std::size_t>& gamma_list,
                                          std::size_t runs, std::uint64_t seed);

} // namespace kljn
