#pragma once
#include <cstddef>
#include <string>

#include "kljn/noise.hpp"

namespace kljn {

// Resistor situation for one bit exchange; first letter is Alice's choice.
// HL and LH are the secure (wire-indistinguishable) pair.
enum class BitSituation { HH, LL, HL, LH };

bool is_secure(BitSituation s);
std::string to_string(BitSituation s);
BitSituation situation_from_string(const std::string& s);
BitSituation make_situation(bool alice_high, bool bob_high);

struct KljnConfig {
    double r_h = 100e3;       // ohms
    double r_l = 10e3;        // ohms
    double t_eff = 1e18;      // kelvin
    double bandwidth = 500.0; // Hz
    std::size_t samples_per_bep = 1000;
    double boltzmann = k_boltzmann;
};

void validate(const KljnConfig& config);

double alice_resistance(const KljnConfig& config, BitSituation s);
double bob_resistance(const KljnConfig& config, BitSituation s);
double parallel_r(double r_a, double r_b);

// Wire quantities for one bit exchange.  Sign convention: positive power
// flows from Alice to Bob.
struct WireRecord {
    std::vector<double> u_w; // volts
    std::vector<double> i_w; // amperes
    std::vector<double> p_w; // watts
    double dt = 0.0;         // seconds
};

// i_w = (u_a - u_b)/(r_a + r_b); u_w = i_w*r_b + u_b; p_w = u_w*i_w.
WireRecord solve_wire(const NoiseTrace& u_a, const NoiseTrace& u_b, double r_a,
                      double r_b);

// 4 k T_eff R_P bandwidth with R_P from the situation's resistor pair.
double expected_mean_square(const KljnConfig& config, BitSituation s);

enum class LevelClass { HH_LEVEL, SECURE, LL_LEVEL };
std::string to_string(LevelClass c);

// Nearest of the three expected mean-square levels on a logarithmic axis;
// SECURE covers both HL and LH.  An exact geometric midpoint resolves to
// SECURE.
LevelClass classify_level(double measured_ms, const KljnConfig& config);

struct SpectralPrediction {
    double s_u = 0.0; // V^2/Hz
    double s_i = 0.0; // A^2/Hz
    double r_p = 0.0; // ohms
    double r_s = 0.0; // ohms
};

// S_u = 4 k T R_P, S_i = 4 k T / R_S for the situation's pair.
SpectralPrediction predicted_spectra(const KljnConfig& config, BitSituation s);

// Arithmetic mean of the instantaneous power sequence.
double net_power(const WireRecord& record);

// Deterministic pseudo-random situation draws from a per-run key, shared by
// every Monte-Carlo driver so truths depend only on (seed, run index).
BitSituation secure_situation_from_key(std::uint64_t key); // HL or LH
BitSituation uniform_situation_from_key(std::uint64_t key); // any of four

} // namespace kljn
