#pragma once
#include <array>
#include <cstdint>

#include "kljn/noise.hpp"

namespace kljn {

// Generalized scheme with four arbitrary resistors.  u2_la is the freely
// chosen mean-square level of Alice's low resistor; the other three levels
// are derived.
struct VmgConfig {
    double r_ha = 0.0;      // ohms
    double r_la = 0.0;      // ohms
    double r_hb = 0.0;      // ohms
    double r_lb = 0.0;      // ohms
    double u2_la = 0.0;     // volts^2
    double bandwidth = 500; // Hz
};

void validate(const VmgConfig& config);

struct VmgDerived {
    double u2_hb = 0.0; // volts^2
    double u2_ha = 0.0;
    double u2_lb = 0.0;
    double t_la = 0.0; // kelvin
    double t_hb = 0.0;
    double t_ha = 0.0;
    double t_lb = 0.0;
};

struct VmgRawLevels {
    double u2_hb = 0.0;
    double u2_ha = 0.0;
    double u2_lb = 0.0;
};

// Literal evaluation of the three dependent level equations, with no
// physicality screening.  Throws singular_configuration_error when a
// denominator vanishes.
VmgRawLevels vmg_level_formulas(const VmgConfig& config);

// Level equations plus validation (every derived U^2 and temperature must be
// nonnegative, else unphysical_configuration_error naming the offending
// quantity) and temperatures via U^2 = 4 k T R bandwidth.
VmgDerived vmg_levels(const VmgConfig& config);

// Zero-power fourth resistor: r_hb * r_la / r_ha (equal geometric means of
// the connected resistor pairs).
double fck1_fourth_resistor(double r_hb, double r_la, double r_ha);

// Levels for the zero-power variant, derived from its defining constraints
// (zero net power flow in both secure situations and equal wire current
// mean-square; equal wire voltage mean-square then follows from the
// geometric-mean resistor relation):
//   u2_hb = u2_la * r_hb / r_la
//   u2_ha = u2_la * r_ha (r_ha + r_lb) / (r_la (r_la + r_hb))
//   u2_lb = u2_ha * r_lb / r_ha
// Requires config.r_lb == fck1_fourth_resistor(r_hb, r_la, r_ha).
VmgDerived fck1_levels(const VmgConfig& config);

// Four independent GBLWN traces scaled to sqrt(u2) RMS each, in the order
// (H,A), (L,A), (H,B), (L,B).
std::array<NoiseTrace, 4> vmg_source_traces(const VmgConfig& config,
                                            const VmgDerived& derived,
                                            std::size_t n_samples,
                                            std::size_t ensemble_count,
                                            const std::array<std::uint64_t, 4>& seeds);

} // namespace kljn
