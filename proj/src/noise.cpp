#include "kljn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "kljn/errors.hpp"
#include "kljn/fft.hpp"
#include "kljn/rng.hpp"

namespace kljn {

double mean_of(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double mean_square(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

double rms_of(const std::vector<double>& x) {
    return std::sqrt(mean_square(x));
}

namespace {

bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

NoiseTrace gen_gblwn(std::size_t n_samples, double bandwidth,
                     std::uint64_t seed, std::size_t ensemble_count) {
    if (n_samples < 2 || !is_pow2(n_samples))
        throw invalid_argument_error(
            "gen_gblwn: n_samples must be a power of two >= 2");
    if (ensemble_count == 0)
        throw invalid_argument_error("gen_gblwn: ensemble_count must be >= 1");
    if (!(bandwidth > 0.0))
        throw invalid_argument_error("gen_gblwn: bandwidth must be positive");

    // (i) ensemble of independent Gaussian streams, averaged.
    std::vector<double> x(n_samples, 0.0);
    for (std::size_t j = 0; j < ensemble_count; ++j) {
        GaussianStream gs(derive_seed(seed, j, fnv1a64("gblwn.stream")));
        for (std::size_t i = 0; i < n_samples; ++i) x[i] += gs();
    }
    for (double& v : x) v /= static_cast<double>(ensemble_count);

    // (ii) renormalize to unit RMS (averaging k streams shrinks RMS by
    // sqrt(k)).
    double ms = mean_square(x);
    if (ms <= 0.0)
        throw degenerate_input_error("gen_gblwn: zero-variance ensemble");
    double inv_rms = 1.0 / std::sqrt(ms);
    for (double& v : x) v *= inv_rms;

    // (iii)-(iv) anti-alias: double the spectral length by zero padding above
    // the band edge, inverse transform, take the real part, decimate back to
    // the Nyquist rate.  The Nyquist bin is split half-and-half so the
    // decimated samples reproduce the band-limited interpolant exactly.
    const std::size_t n = n_samples;
    std::vector<std::complex<double>> xc(n);
    for (std::size_t i = 0; i < n; ++i) xc[i] = x[i];
    auto spec = fft(xc, false);
    std::vector<std::complex<double>> padded(2 * n, std::complex<double>(0.0));
    for (std::size_t k = 0; k < n / 2; ++k) padded[k] = spec[k];
    padded[n / 2] = 0.5 * spec[n / 2];
    padded[2 * n - n / 2] = 0.5 * spec[n / 2];
    for (std::size_t k = n / 2 + 1; k < n; ++k) padded[n + k] = spec[k];
    auto dense = fft(padded, true);

    NoiseTrace out;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = 2.0 * dense[2 * i].real();
    out.bandwidth = bandwidth;
    out.dt = 1.0 / (2.0 * bandwidth);
    return out;
}

NoiseTrace gen_gblwn_window(std::size_t n_samples, double bandwidth,
                            std::uint64_t seed, std::size_t ensemble_count) {
    if (n_samples < 2)
        throw invalid_argument_error("gen_gblwn_window: n_samples must be >= 2");
    NoiseTrace t = gen_gblwn(next_pow2(n_samples), bandwidth, seed,
                             ensemble_count);
    t.samples.resize(n_samples);
    return t;
}

NoiseTrace scale_to_rms(const NoiseTrace& trace, double target_rms) {
    if (!(target_rms >= 0.0))
        throw invalid_argument_error("scale_to_rms: negative target");
    double ms = mean_square(trace.samples);
    if (ms <= 0.0)
        throw degenerate_input_error("scale_to_rms: zero-variance input trace");
    double g = target_rms / std::sqrt(ms);
    NoiseTrace out = trace;
    for (double& v : out.samples) v *= g;
    return out;
}

NoiseTrace scale_johnson(const NoiseTrace& trace, double r, double t_eff,
                         double bandwidth) {
    if (!(r > 0.0) || !(t_eff > 0.0) || !(bandwidth > 0.0))
        throw invalid_argument_error(
            "scale_johnson: r, t_eff, bandwidth must be positive");
    double target = std::sqrt(4.0 * k_boltzmann * t_eff * r * bandwidth);
    return scale_to_rms(trace, target);
}

NoiseTrace mix_eve_noise(const NoiseTrace& base, const NoiseTrace& independent,
                         double m, double r, double t_eff, double bandwidth) {
    if (base.samples.size() != independent.samples.size())
        throw invalid_argument_error("mix_eve_noise: length mismatch");
    if (base.dt != independent.dt)
        throw invalid_argument_error("mix_eve_noise: dt mismatch");
    if (m < 0.0) throw invalid_argument_error("mix_eve_noise: m must be >= 0");
    NoiseTrace sum = base;
    for (std::size_t i = 0; i < sum.samples.size(); ++i)
        sum.samples[i] += m * independent.samples[i];
    return scale_johnson(sum, r, t_eff, bandwidth);
}

NoiseQualityReport quality_report(const NoiseTrace& trace,
                                  std::size_t n_psd_segments) {
    const auto& x = trace.samples;
    if (n_psd_segments == 0 || x.size() < 4 * n_psd_segments)
        throw invalid_argument_error(
            "quality_report: trace length must be >= 4 * n_psd_segments");

    NoiseQualityReport rep;
    const std::size_t n = x.size();
    rep.mean = mean_of(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        double d = v - rep.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    rep.std = std::sqrt(m2);
    if (m2 > 0.0) {
        rep.skewness = m3 / (m2 * rep.std);
        rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) num += x[i] * x[i + 1];
        for (double v : x) den += v * v;
        rep.lag1_autocorr = num / den;
    }

    // Segment-averaged one-sided periodogram; integral over [0, bandwidth]
    // recovers the mean square (Parseval).
    const std::size_t seg = n / n_psd_segments;
    const std::size_t half = seg / 2;
    std::vector<double> psd(half + 1, 0.0);
    std::vector<std::complex<double>> buf(seg);
    for (std::size_t s = 0; s < n_psd_segments; ++s) {
        for (std::size_t i = 0; i < seg; ++i) buf[i] = x[s * seg + i];
        auto spec = fft(buf, false);
        for (std::size_t k = 0; k <= half; ++k) {
            double mag2 = std::norm(spec[k]);
            double one_sided = (k == 0 || k == half) ? 1.0 : 2.0;
            psd[k] += one_sided * mag2 * trace.dt / static_cast<double>(seg);
        }
    }
    rep.psd_bins.reserve(half + 1);
    double df = 1.0 / (static_cast<double>(seg) * trace.dt);
    for (std::size_t k = 0; k <= half; ++k)
        rep.psd_bins.emplace_back(static_cast<double>(k) * df,
                                  psd[k] / static_cast<double>(n_psd_segments));
    return rep;
}

} // namespace kljn
