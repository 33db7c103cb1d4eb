#pragma once
#include <cstdint>
#include <utility>
#include <vector>

namespace kljn {

inline constexpr double k_boltzmann = 1.380649e-23; // J/K

// Uniformly sampled real voltage sequence at the Nyquist rate of its band:
// dt == 1 / (2 * bandwidth).
struct NoiseTrace {
    std::vector<double> samples; // volts
    double dt = 0.0;             // seconds
    double bandwidth = 0.0;      // Hz
};

struct NoiseQualityReport {
    double mean = 0.0;
    double std = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double lag1_autocorr = 0.0;
    std::vector<std::pair<double, double>> psd_bins; // (Hz, V^2/Hz), one-sided
};

// Basic sequence statistics (biased 1/N moments, matching time-average
// notation used throughout).
double mean_of(const std::vector<double>& x);
double mean_square(const std::vector<double>& x);
double rms_of(const std::vector<double>& x);

// Gaussian band-limited white noise at unit RMS.
//
// Procedure: ensemble-average `ensemble_count` independent Gaussian streams,
// renormalize to unit RMS, then anti-alias through the frequency domain
// (forward FFT, zero-pad the spectrum to twice the length above the band
// edge, inverse FFT, take the real part, decimate back to the Nyquist rate).
// n_samples must be a power of two (>= 2); deterministic for fixed inputs.
NoiseTrace gen_gblwn(std::size_t n_samples, double bandwidth,
                     std::uint64_t seed, std::size_t ensemble_count);

// Same synthesis for an arbitrary record length: generates the next power of
// two and truncates.  Downstream scaling renormalizes on the truncated
// window, so Johnson levels stay exact per record.
NoiseTrace gen_gblwn_window(std::size_t n_samples, double bandwidth,
                            std::uint64_t seed, std::size_t ensemble_count);

// Rescale a trace so its RMS equals exactly `target_rms`.
NoiseTrace scale_to_rms(const NoiseTrace& trace, double target_rms);

// Johnson scaling: renormalize to unit RMS, then multiply so that
// RMS^2 == 4 k T_eff R bandwidth exactly.
NoiseTrace scale_johnson(const NoiseTrace& trace, double r, double t_eff,
                         double bandwidth);

// The eavesdropper's partially correlated copy: (base + m * independent),
// renormalized to the Johnson RMS for (r, t_eff, bandwidth).  The independent
// trace is supplied by the caller (and must already sit at the same RMS scale
// as base for the 1/sqrt(1+M^2) correlation law to hold); which additive
// process is shared between records is the caller's choice.
NoiseTrace mix_eve_noise(const NoiseTrace& base, const NoiseTrace& independent,
                         double m, double r, double t_eff, double bandwidth);

// Moments, lag-1 autocorrelation, and a segment-averaged one-sided
// periodogram spanning [0, bandwidth].
NoiseQualityReport quality_report(const NoiseTrace& trace,
                                  std::size_t n_psd_segments);

} // namespace kljn
